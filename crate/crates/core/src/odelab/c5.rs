//! DETEST C5: five outer planets around the sun in heliocentric coordinates.

use super::LabError;
use crate::aderops::OdeRhs;
use sha2::{Digest, Sha256};
use std::path::Path;

/// Bundled constants file.
pub const C5_DATA: &str = include_str!("../../data/c5_v1.dat");

#[derive(Debug, Clone, PartialEq)]
pub struct Body {
    pub name: String,
    pub mass: f64,
    pub position: [f64; 3],
    pub velocity: [f64; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct C5Constants {
    pub k2: f64,
    pub m0: f64,
    pub bodies: Vec<Body>,
}

impl C5Constants {
    /// The bundled data set.
    pub fn bundled() -> Self {
        Self::parse(C5_DATA).expect("bundled C5 data is valid")
    }

    pub fn from_path(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::Data(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Parses the data format and verifies its checksum.
    pub fn parse(text: &str) -> Result<Self, LabError> {
        let (head, body) =
            text.split_once("\n---\n").ok_or_else(|| LabError::Data("missing '---' separator".into()))?;
        let expected = head
            .lines()
            .find_map(|l| l.strip_prefix("sha256 "))
            .ok_or_else(|| LabError::Data("missing sha256 line".into()))?
            .trim();
        let actual: String = Sha256::digest(body.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
        if actual != expected {
            return Err(LabError::Data(format!("checksum mismatch: expected {expected}, got {actual}")));
        }
        let mut k2 = None;
        let mut m0 = None;
        let mut bodies = Vec::new();
        for (lineno, line) in body.lines().enumerate() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| {
                s.parse::<f64>().map_err(|_| LabError::Data(format!("line {}: bad number '{s}'", lineno + 1)))
            };
            match fields.as_slice() {
                [] => {}
                ["k2", v] => k2 = Some(num(v)?),
                ["m0", v] => m0 = Some(num(v)?),
                ["body", name, rest @ ..] if rest.len() == 7 => {
                    let v: Vec<f64> = rest.iter().map(|s| num(s)).collect::<Result<_, _>>()?;
                    bodies.push(Body {
                        name: name.to_string(),
                        mass: v[0],
                        position: [v[1], v[2], v[3]],
                        velocity: [v[4], v[5], v[6]],
                    });
                }
                _ => return Err(LabError::Data(format!("line {}: unrecognised '{line}'", lineno + 1))),
            }
        }
        let k2 = k2.ok_or_else(|| LabError::Data("missing k2".into()))?;
        let m0 = m0.ok_or_else(|| LabError::Data("missing m0".into()))?;
        if bodies.len() != 5 {
            return Err(LabError::Data(format!("expected 5 bodies, found {}", bodies.len())));
        }
        Ok(Self { k2, m0, bodies })
    }

    /// State vector: positions of all bodies, then velocities.
    pub fn initial_state(&self) -> Vec<f64> {
        let mut u = Vec::with_capacity(30);
        u.extend(self.bodies.iter().flat_map(|b| b.position));
        u.extend(self.bodies.iter().flat_map(|b| b.velocity));
        u
    }

    fn masses(&self) -> [f64; 5] {
        std::array::from_fn(|j| self.bodies[j].mass)
    }

    /// Barycentric total energy of the sun–planet system.
    pub fn energy(&self, u: &[f64]) -> f64 {
        let (q, v) = barycentric(self, u);
        let m = self.all_masses();
        let mut kin = 0.0;
        let mut pot = 0.0;
        for i in 0..6 {
            kin += 0.5 * m[i] * dot(&v[i], &v[i]);
            for j in i + 1..6 {
                pot -= self.k2 * m[i] * m[j] / dist(&q[i], &q[j]);
            }
        }
        kin + pot
    }

    /// Barycentric total angular momentum.
    pub fn angular_momentum(&self, u: &[f64]) -> [f64; 3] {
        let (q, v) = barycentric(self, u);
        let m = self.all_masses();
        let mut l = [0.0; 3];
        for i in 0..6 {
            let c = cross(&q[i], &v[i]);
            for k in 0..3 {
                l[k] += m[i] * c[k];
            }
        }
        l
    }

    fn all_masses(&self) -> [f64; 6] {
        let pm = self.masses();
        [self.m0, pm[0], pm[1], pm[2], pm[3], pm[4]]
    }
}

/// Sun (index 0) and planets in the barycentric frame.
fn barycentric(c: &C5Constants, u: &[f64]) -> ([[f64; 3]; 6], [[f64; 3]; 6]) {
    let pm = c.masses();
    let total = c.m0 + pm.iter().sum::<f64>();
    let mut rq = [0.0; 3];
    let mut rv = [0.0; 3];
    for j in 0..5 {
        for k in 0..3 {
            rq[k] += pm[j] * u[3 * j + k] / total;
            rv[k] += pm[j] * u[15 + 3 * j + k] / total;
        }
    }
    let mut q = [[0.0; 3]; 6];
    let mut v = [[0.0; 3]; 6];
    for k in 0..3 {
        q[0][k] = -rq[k];
        v[0][k] = -rv[k];
    }
    for j in 0..5 {
        for k in 0..3 {
            q[j + 1][k] = u[3 * j + k] - rq[k];
            v[j + 1][k] = u[15 + 3 * j + k] - rv[k];
        }
    }
    (q, v)
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Heliocentric equations of motion:
/// y″ⱼ = k2·(−(m0+mⱼ)yⱼ/rⱼ³ + Σ_{k≠j} mₖ[(yₖ−yⱼ)/dⱼₖ³ − yₖ/rₖ³]).
#[derive(Debug, Clone)]
pub struct C5Rhs {
    k2: f64,
    m0: f64,
    mass: [f64; 5],
}

impl C5Rhs {
    pub fn new(c: &C5Constants) -> Self {
        Self { k2: c.k2, m0: c.m0, mass: c.masses() }
    }
}

impl OdeRhs for C5Rhs {
    fn dim(&self) -> usize {
        30
    }

    fn is_autonomous(&self) -> bool {
        true
    }

    fn eval(&self, _t: f64, u: &[f64], out: &mut [f64]) {
        let (q, v) = u.split_at(15);
        let (dq, dv) = out.split_at_mut(15);
        dq.copy_from_slice(v);
        let mut inv_r3 = [0.0; 5];
        for j in 0..5 {
            let y = &q[3 * j..3 * j + 3];
            let r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
            inv_r3[j] = 1.0 / (r2 * r2.sqrt());
        }
        // indirect term Σₖ mₖ yₖ / rₖ³, shared by all bodies
        let mut ind = [0.0; 3];
        for k in 0..5 {
            for c in 0..3 {
                ind[c] += self.mass[k] * q[3 * k + c] * inv_r3[k];
            }
        }
        for j in 0..5 {
            let f = -(self.m0 + self.mass[j]) * inv_r3[j];
            for c in 0..3 {
                // the k = j term of the indirect sum is not part of the force
                dv[3 * j + c] = f * q[3 * j + c] - ind[c] + self.mass[j] * q[3 * j + c] * inv_r3[j];
            }
        }
        for j in 0..5 {
            for k in j + 1..5 {
                let d = [q[3 * k] - q[3 * j], q[3 * k + 1] - q[3 * j + 1], q[3 * k + 2] - q[3 * j + 2]];
                let d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                let inv_d3 = 1.0 / (d2 * d2.sqrt());
                for c in 0..3 {
                    dv[3 * j + c] += self.mass[k] * d[c] * inv_d3;
                    dv[3 * k + c] -= self.mass[j] * d[c] * inv_d3;
                }
            }
        }
        for a in dv.iter_mut() {
            *a *= self.k2;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_data_parses() {
        let c = C5Constants::bundled();
        assert_eq!(c.bodies.len(), 5);
        assert_eq!(c.bodies[0].name, "Jupiter");
        assert_eq!(c.initial_state().len(), 30);
    }

    #[test]
    fn corrupted_data_is_rejected() {
        let bad = C5_DATA.replace("9.0755314", "9.0755315");
        assert!(matches!(C5Constants::parse(&bad), Err(LabError::Data(_))));
        assert!(C5Constants::parse("no separator").is_err());
        assert!(C5Constants::from_path(Path::new("/nonexistent/c5.dat")).is_err());
    }

    #[test]
    fn rhs_matches_direct_pairwise_sum() {
        let c = C5Constants::bundled();
        let u = c.initial_state();
        let mut out = vec![0.0; 30];
        C5Rhs::new(&c).eval(0.0, &u, &mut out);
        let m: Vec<f64> = c.bodies.iter().map(|b| b.mass).collect();
        for j in 0..5 {
            let yj = &u[3 * j..3 * j + 3];
            let rj = (yj.iter().map(|x| x * x).sum::<f64>()).sqrt();
            for comp in 0..3 {
                let mut a = -(c.m0 + m[j]) * yj[comp] / rj.powi(3);
                for k in 0..5 {
                    if k == j {
                        continue;
                    }
                    let yk = &u[3 * k..3 * k + 3];
                    let rk = (yk.iter().map(|x| x * x).sum::<f64>()).sqrt();
                    let d = ((0..3).map(|i| (yk[i] - yj[i]).powi(2)).sum::<f64>()).sqrt();
                    a += m[k] * ((yk[comp] - yj[comp]) / d.powi(3) - yk[comp] / rk.powi(3));
                }
                a *= c.k2;
                assert!((out[15 + 3 * j + comp] - a).abs() <= 1e-14 * a.abs().max(1e-12));
            }
        }
    }
}
