//! Subtimenode distributions on the reference interval [0,1], their Lagrange
//! bases, and the quadrature rules used to assemble the ADER matrices.
//!
//! Three node families are supported. With M+1 nodes the ADER scheme built on
//! them is of order M+1 (equispaced), 2M (Gauss–Lobatto) or 2M+1
//! (Gauss–Legendre).

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    #[serde(rename = "equi")]
    Equispaced,
    #[serde(rename = "glb")]
    GaussLobatto,
    #[serde(rename = "glg")]
    GaussLegendre,
}

impl NodeKind {
    pub const ALL: [NodeKind; 3] = [NodeKind::Equispaced, NodeKind::GaussLobatto, NodeKind::GaussLegendre];

    /// Smallest admissible degree M for a node set of this kind.
    pub fn min_degree(self) -> usize {
        match self {
            NodeKind::GaussLegendre => 0,
            _ => 1,
        }
    }

    /// Order of the ADER scheme with M+1 nodes of this kind and enough
    /// iterations.
    pub fn accuracy(self, m: usize) -> usize {
        match self {
            NodeKind::Equispaced => m + 1,
            NodeKind::GaussLobatto => 2 * m,
            NodeKind::GaussLegendre => 2 * m + 1,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            NodeKind::Equispaced => "equi",
            NodeKind::GaussLobatto => "glb",
            NodeKind::GaussLegendre => "glg",
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for NodeKind {
    type Err = BasisError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "equi" | "equispaced" => Ok(NodeKind::Equispaced),
            "glb" | "gausslobatto" | "gauss-lobatto" | "lobatto" => Ok(NodeKind::GaussLobatto),
            "glg" | "gausslegendre" | "gauss-legendre" | "legendre" => Ok(NodeKind::GaussLegendre),
            _ => Err(BasisError::UnknownKind(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BasisError {
    #[error("degree M={m} is not admissible for {kind} nodes")]
    InvalidDegree { kind: NodeKind, m: usize },
    #[error("{npoints} points is not admissible for a {kind} quadrature rule")]
    InvalidPointCount { kind: NodeKind, npoints: usize },
    #[error("Newton iteration for a Legendre root did not converge (degree {degree})")]
    RootNotConverged { degree: usize },
    #[error("unknown node kind '{0}' (expected equi, glb or glg)")]
    UnknownKind(String),
}

/// M+1 ordered subtimenodes on [0,1] with their cardinal Lagrange basis.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    kind: NodeKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    bary: Vec<f64>,
}

impl NodeSet {
    pub fn kind(&self) -> NodeKind {
        self.kind
    }

    /// Polynomial degree M.
    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Induced quadrature weights wₘ = ∫₀¹ ψᵐ.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Evaluates the m-th cardinal polynomial at ξ. Exactly 1 at its own node
    /// and exactly 0 at every other node.
    pub fn lagrange(&self, m: usize, xi: f64) -> f64 {
        if xi == self.nodes[m] {
            return 1.0;
        }
        let mut p = self.bary[m];
        for (k, &xk) in self.nodes.iter().enumerate() {
            if k != m {
                p *= xi - xk;
            }
        }
        p
    }

    /// Derivative of the m-th cardinal polynomial at ξ.
    pub fn lagrange_deriv(&self, m: usize, xi: f64) -> f64 {
        let n = self.nodes.len();
        let mut sum = 0.0;
        for j in 0..n {
            if j == m {
                continue;
            }
            let mut p = 1.0;
            for k in 0..n {
                if k != m && k != j {
                    p *= xi - self.nodes[k];
                }
            }
            sum += p;
        }
        self.bary[m] * sum
    }

    /// All basis values ψᵐ(ξ), m = 0..=M.
    pub fn basis_at(&self, xi: f64) -> Vec<f64> {
        (0..self.len()).map(|m| self.lagrange(m, xi)).collect()
    }

    /// All basis derivatives at ξ.
    pub fn basis_deriv_at(&self, xi: f64) -> Vec<f64> {
        (0..self.len()).map(|m| self.lagrange_deriv(m, xi)).collect()
    }

    /// Interpolates nodal values at ξ.
    pub fn interpolate(&self, values: &[f64], xi: f64) -> f64 {
        values.iter().enumerate().map(|(m, v)| v * self.lagrange(m, xi)).sum()
    }
}

/// Builds the M+1 nodes of the given family on [0,1].
pub fn make_nodes(kind: NodeKind, m: usize) -> Result<NodeSet, BasisError> {
    if m < kind.min_degree() {
        return Err(BasisError::InvalidDegree { kind, m });
    }
    let nodes = match kind {
        NodeKind::Equispaced => (0..=m).map(|i| i as f64 / m as f64).collect(),
        NodeKind::GaussLobatto => lobatto_points(m + 1)?,
        NodeKind::GaussLegendre => gauss_rule(m + 1)?.0,
    };
    let bary = barycentric_weights(&nodes);
    let mut ns = NodeSet { kind, nodes, weights: Vec::new(), bary };
    let (qx, qw) = gauss_rule(m + 1)?;
    ns.weights = (0..=m).map(|j| qx.iter().zip(&qw).map(|(&x, &w)| w * ns.lagrange(j, x)).sum()).collect();
    Ok(ns)
}

/// A quadrature rule on [0,1].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub kind: NodeKind,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    pub degree_of_exactness: usize,
}

impl QuadratureRule {
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Quadrature rule with `npoints` nodes of the given family.
///
/// Gauss–Legendre rules are exact to degree 2n−1, Gauss–Lobatto to 2n−3 and
/// closed Newton–Cotes (equispaced) to n−1, or n when n is odd.
pub fn make_quadrature(kind: NodeKind, npoints: usize) -> Result<QuadratureRule, BasisError> {
    match kind {
        NodeKind::GaussLegendre => {
            if npoints == 0 {
                return Err(BasisError::InvalidPointCount { kind, npoints });
            }
            let (points, weights) = gauss_rule(npoints)?;
            Ok(QuadratureRule { kind, points, weights, degree_of_exactness: 2 * npoints - 1 })
        }
        NodeKind::GaussLobatto | NodeKind::Equispaced => {
            if npoints < 2 {
                return Err(BasisError::InvalidPointCount { kind, npoints });
            }
            let ns = make_nodes(kind, npoints - 1)?;
            let degree = match kind {
                NodeKind::GaussLobatto => 2 * npoints - 3,
                _ if npoints % 2 == 1 => npoints,
                _ => npoints - 1,
            };
            Ok(QuadratureRule {
                kind,
                points: ns.nodes.clone(),
                weights: ns.weights.clone(),
                degree_of_exactness: degree,
            })
        }
    }
}

/// Legendre polynomial Pₙ and its derivative at x ∈ [−1,1], by recurrence.
pub fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for k in 1..n {
        let k = k as f64;
        let p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = if (x * x - 1.0).abs() < 1e-300 {
        // P'ₙ(±1) = (±1)^{n+1} n(n+1)/2
        let s = if x > 0.0 || n % 2 == 1 { 1.0 } else { -1.0 };
        s * nf * (nf + 1.0) / 2.0
    } else {
        nf * (x * p1 - p0) / (x * x - 1.0)
    };
    (p1, dp)
}

fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    (0..nodes.len())
        .map(|j| {
            let prod: f64 = nodes.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &xk)| nodes[j] - xk).product();
            1.0 / prod
        })
        .collect()
}

/// Newton refinement of a root of `f` from `x0`; `f` returns (value, slope).
fn newton(mut x: f64, degree: usize, f: impl Fn(f64) -> (f64, f64)) -> Result<f64, BasisError> {
    for _ in 0..NEWTON_MAX_ITER {
        let (v, d) = f(x);
        let dx = v / d;
        x -= dx;
        if dx.abs() <= NEWTON_TOL {
            return Ok(x);
        }
    }
    Err(BasisError::RootNotConverged { degree })
}

/// Gauss–Legendre points and weights on [0,1], symmetric by construction.
fn gauss_rule(n: usize) -> Result<(Vec<f64>, Vec<f64>), BasisError> {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // descending roots on [-1,1]; root i sits near cos(π(i+3/4)/(n+1/2))
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let r = if n % 2 == 1 && i == n / 2 { 0.0 } else { newton(guess, n, |t| legendre(n, t))? };
        let (_, dp) = legendre(n, r);
        let wi = 1.0 / ((1.0 - r * r) * dp * dp);
        // map the negative root to the left end so points ascend
        x[i] = 0.5 * (1.0 - r);
        x[n - 1 - i] = 1.0 - x[i];
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.5;
    }
    Ok((x, w))
}

/// Gauss–Lobatto points on [0,1]: the endpoints and the roots of P'ₙ₋₁.
fn lobatto_points(n: usize) -> Result<Vec<f64>, BasisError> {
    let m = n - 1;
    let mut x = vec![0.0; n];
    x[m] = 1.0;
    let mf = m as f64;
    for i in 1..n.div_ceil(2) {
        let guess = (std::f64::consts::PI * i as f64 / mf).cos();
        let r = if m % 2 == 0 && 2 * i == m {
            0.0
        } else {
            newton(guess, m, |t| {
                let (p, dp) = legendre(m, t);
                let d2p = (2.0 * t * dp - mf * (mf + 1.0) * p) / (1.0 - t * t);
                (dp, d2p)
            })?
        };
        x[i] = 0.5 * (1.0 - r);
        x[m - i] = 1.0 - x[i];
    }
    if m % 2 == 0 {
        x[m / 2] = 0.5;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_node_sets() {
        let e = make_nodes(NodeKind::Equispaced, 1).unwrap();
        assert_eq!(e.nodes(), &[0.0, 1.0]);
        let l = make_nodes(NodeKind::GaussLobatto, 2).unwrap();
        assert_eq!(l.nodes(), &[0.0, 0.5, 1.0]);
        let g = make_nodes(NodeKind::GaussLegendre, 0).unwrap();
        assert_eq!(g.nodes(), &[0.5]);
        assert!((g.weights()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_inadmissible_degrees() {
        assert!(make_nodes(NodeKind::Equispaced, 0).is_err());
        assert!(make_nodes(NodeKind::GaussLobatto, 0).is_err());
        assert!(make_quadrature(NodeKind::GaussLobatto, 1).is_err());
        assert!(make_quadrature(NodeKind::GaussLegendre, 0).is_err());
    }

    #[test]
    fn linear_hats() {
        let e = make_nodes(NodeKind::Equispaced, 1).unwrap();
        assert_eq!(e.lagrange(0, 0.5), 0.5);
        for xi in [0.0, 0.3, 0.9] {
            assert_eq!(e.lagrange_deriv(0, xi), -1.0);
            assert_eq!(e.lagrange_deriv(1, xi), 1.0);
        }
    }

    #[test]
    fn lobatto_m2_partition_sums() {
        let l = make_nodes(NodeKind::GaussLobatto, 2).unwrap();
        let s: f64 = l.basis_at(0.3).iter().sum();
        assert!((s - 1.0).abs() < 1e-15);
        let d: f64 = l.basis_deriv_at(0.7).iter().sum();
        assert!(d.abs() < 1e-14);
    }

    #[test]
    fn trapezoid_and_midpoint() {
        let t = make_quadrature(NodeKind::GaussLobatto, 2).unwrap();
        assert_eq!(t.points, vec![0.0, 1.0]);
        assert!((t.weights[0] - 0.5).abs() < 1e-15 && (t.weights[1] - 0.5).abs() < 1e-15);
        let m = make_quadrature(NodeKind::GaussLegendre, 1).unwrap();
        assert_eq!(m.points, vec![0.5]);
        assert!((m.weights[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn legendre_endpoint_derivative() {
        for n in 1..8 {
            let (p, dp) = legendre(n, 1.0);
            assert!((p - 1.0).abs() < 1e-14);
            assert!((dp - (n * (n + 1)) as f64 / 2.0).abs() < 1e-12);
            let (_, dm) = legendre(n, -1.0);
            let expected = if n % 2 == 1 { 1.0 } else { -1.0 } * (n * (n + 1)) as f64 / 2.0;
            assert!((dm - expected).abs() < 1e-12);
        }
    }
}
