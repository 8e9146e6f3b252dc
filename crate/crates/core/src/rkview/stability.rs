use super::ButcherTableau;
use num_complex::Complex64;

const BRACKET_LO: f64 = 1e-3;
const BRACKET_HI: f64 = 10.0;
const SCAN_STEP: f64 = 1e-3;

/// Coefficients 1/r!, r = 0..=P, of the stability function shared by every
/// ADER scheme of order P.
pub fn stability_poly(p: usize) -> Vec<f64> {
    let mut c = Vec::with_capacity(p + 1);
    let mut f = 1.0;
    for r in 0..=p {
        if r > 0 {
            f /= r as f64;
        }
        c.push(f);
    }
    c
}

/// Σ_{r≤P} z^r / r!.
pub fn truncated_exp(p: usize, z: Complex64) -> Complex64 {
    stability_poly(p).iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// R(z) = 1 + z bᵀ(I − zA)⁻¹𝟙 evaluated from the tableau.
pub fn tableau_stability(t: &ButcherTableau, z: Complex64) -> Complex64 {
    let s = t.stages();
    let one = Complex64::new(1.0, 0.0);
    let y: Vec<Complex64> = if t.is_strictly_lower() {
        let mut y = vec![one; s];
        for i in 0..s {
            let acc: Complex64 = (0..i).map(|j| y[j] * t.a[(i, j)]).sum();
            y[i] = one + z * acc;
        }
        y
    } else {
        let mut m: Vec<Vec<Complex64>> = (0..s)
            .map(|i| {
                (0..s)
                    .map(|j| if i == j { one } else { Complex64::new(0.0, 0.0) } - z * t.a[(i, j)])
                    .chain(std::iter::once(one))
                    .collect()
            })
            .collect();
        solve_complex(&mut m)
    };
    one + z * y.iter().zip(&t.b).map(|(yi, bi)| yi * bi).sum::<Complex64>()
}

/// Gaussian elimination with partial pivoting on an augmented system.
fn solve_complex(m: &mut [Vec<Complex64>]) -> Vec<Complex64> {
    let n = m.len();
    for k in 0..n {
        let p = (k..n).max_by(|&a, &b| m[a][k].norm().total_cmp(&m[b][k].norm())).expect("nonempty");
        m.swap(k, p);
        for i in k + 1..n {
            let l = m[i][k] / m[k][k];
            for j in k..=n {
                let v = m[k][j];
                m[i][j] -= l * v;
            }
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for i in (0..n).rev() {
        let s: Complex64 = (i + 1..n).map(|j| m[i][j] * x[j]).sum();
        x[i] = (m[i][n] - s) / m[i][i];
    }
    x
}

/// Largest r along direction `dir` with |R(r·dir)| ≤ 1: scan from the
/// origin for the first unstable sample, then bisect.
fn first_exit(p: usize, dir: Complex64) -> f64 {
    let stable = |r: f64| truncated_exp(p, dir * r).norm() <= 1.0 + 1e-14;
    let n = ((BRACKET_HI - BRACKET_LO) / SCAN_STEP).round() as usize;
    if !stable(BRACKET_LO) {
        return 0.0;
    }
    let mut lo = BRACKET_LO;
    let mut hi = None;
    for i in 1..=n {
        let r = BRACKET_LO + i as f64 * SCAN_STEP;
        if stable(r) {
            lo = r;
        } else {
            hi = Some(r);
            break;
        }
    }
    let Some(mut hi) = hi else { return BRACKET_HI };
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if stable(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Largest Δt with |R(−Δt)| ≤ 1 for the order-P stability function.
///
/// The search is confined to [1e-3, 10]; the first crossing is bracketed by
/// a fine scan so detached stable islands further out are ignored.
pub fn max_real_step(p: usize) -> f64 {
    first_exit(p, Complex64::new(-1.0, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub theta: f64,
    pub re: f64,
    pub im: f64,
}

/// Samples the boundary of the stability region along `n` rays with angles
/// evenly spaced over [π/2, 3π/2] (the left half plane).
pub fn stability_region_boundary(p: usize, n: usize) -> Vec<BoundaryPoint> {
    use std::f64::consts::PI;
    (0..n)
        .map(|i| {
            let theta = if n == 1 { PI } else { PI / 2.0 + PI * i as f64 / (n - 1) as f64 };
            let dir = Complex64::from_polar(1.0, theta);
            let r = first_exit(p, dir);
            let z = dir * r;
            BoundaryPoint { theta, re: z.re, im: z.im }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_polys() {
        assert_eq!(stability_poly(1), vec![1.0, 1.0]);
        let p3 = stability_poly(3);
        assert_eq!(&p3[..3], &[1.0, 1.0, 0.5]);
        assert!((p3[3] - 1.0 / 6.0).abs() < 1e-16);
    }

    #[test]
    fn euler_bound_is_two() {
        assert!((max_real_step(1) - 2.0).abs() < 1e-6);
        assert!((max_real_step(2) - 2.0).abs() < 1e-6);
    }

    #[test]
    fn boundary_hits_real_bound_at_pi() {
        let pts = stability_region_boundary(4, 3);
        assert!((pts[1].re + max_real_step(4)).abs() < 1e-12);
        assert!(pts[1].im.abs() < 1e-12);
    }
}
