use super::SdError;
use crate::linalg::{Lu, Mat};
use crate::timebasis::{make_nodes, NodeKind, NodeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Periodic,
    ZeroGradient,
}

/// Spectral-difference mesh on [x_L, x_R].
///
/// Each element carries M+1 solution points (Gauss–Legendre) and M+2 flux
/// points: the two extrema plus the zeros of the Legendre polynomial P_M.
/// Consecutive flux points bound the M+1 subcells used by the limiter.
#[derive(Debug, Clone)]
pub struct SdMesh {
    k: usize,
    m: usize,
    x_l: f64,
    x_r: f64,
    bc: Boundary,
    widths: Vec<f64>,
    lefts: Vec<f64>,
    solution: NodeSet,
    flux_ref: Vec<f64>,
    interp: Mat,
    deriv: Mat,
    sub_avg: Mat,
    sub_avg_inv: Mat,
}

pub fn build_mesh(k: usize, m: usize, domain: (f64, f64), bc: Boundary) -> Result<SdMesh, SdError> {
    if k < 3 {
        return Err(SdError::TooFewElements(k));
    }
    if m < 1 {
        return Err(SdError::InvalidDegree(m));
    }
    let (x_l, x_r) = domain;
    if !(x_r > x_l) {
        return Err(SdError::BadDomain(x_l, x_r));
    }
    let solution = make_nodes(NodeKind::GaussLegendre, m)?;
    let interior = make_nodes(NodeKind::GaussLegendre, m - 1)?;
    let mut flux_ref = Vec::with_capacity(m + 2);
    flux_ref.push(0.0);
    flux_ref.extend_from_slice(interior.nodes());
    flux_ref.push(1.0);

    let interp = Mat::from_fn(m + 2, m + 1, |f, s| solution.lagrange(s, flux_ref[f]));
    let deriv = Mat::from_fn(m + 1, m + 2, |s, f| lagrange_deriv(&flux_ref, f, solution.nodes()[s]));
    // subcell averages of the solution basis, exact with M+1 Gauss points
    let gauss = make_nodes(NodeKind::GaussLegendre, m)?;
    let sub_avg = Mat::from_fn(m + 1, m + 1, |j, s| {
        let (a, b) = (flux_ref[j], flux_ref[j + 1]);
        gauss.nodes().iter().zip(gauss.weights()).map(|(&xi, &w)| w * solution.lagrange(s, a + (b - a) * xi)).sum()
    });
    let sub_avg_inv = Lu::factor(&sub_avg, 1e-14).map_err(|_| SdError::SingularSubcellMap)?.inverse();

    let dx = (x_r - x_l) / k as f64;
    let widths = vec![dx; k];
    let lefts = (0..k).map(|e| x_l + e as f64 * dx).collect();
    Ok(SdMesh { k, m, x_l, x_r, bc, widths, lefts, solution, flux_ref, interp, deriv, sub_avg, sub_avg_inv })
}

/// Derivative of the Lagrange polynomial through `pts` for index `j`,
/// evaluated away from the nodes.
fn lagrange_deriv(pts: &[f64], j: usize, x: f64) -> f64 {
    let mut value = 1.0;
    let mut sum = 0.0;
    for (i, &p) in pts.iter().enumerate() {
        if i != j {
            value *= (x - p) / (pts[j] - p);
            sum += 1.0 / (x - p);
        }
    }
    value * sum
}

impl SdMesh {
    pub fn elements(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn points_per_element(&self) -> usize {
        self.m + 1
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x_l, self.x_r)
    }

    pub fn boundary(&self) -> Boundary {
        self.bc
    }

    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn min_width(&self) -> f64 {
        self.widths.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Solution points on the reference element [0, 1].
    pub fn solution_ref(&self) -> &[f64] {
        self.solution.nodes()
    }

    /// Quadrature weights of the solution points on [0, 1].
    pub fn solution_weights(&self) -> &[f64] {
        self.solution.weights()
    }

    /// Flux points on the reference element, extrema included.
    pub fn flux_ref(&self) -> &[f64] {
        &self.flux_ref
    }

    /// Physical coordinates of all solution points, element by element.
    pub fn solution_points(&self) -> Vec<f64> {
        let mut x = Vec::with_capacity(self.k * (self.m + 1));
        for e in 0..self.k {
            for &xi in self.solution.nodes() {
                x.push(self.lefts[e] + xi * self.widths[e]);
            }
        }
        x
    }

    pub fn flux_points(&self, e: usize) -> Vec<f64> {
        self.flux_ref.iter().map(|&xi| self.lefts[e] + xi * self.widths[e]).collect()
    }

    /// Number of subcells (one per solution point).
    pub fn subcells(&self) -> usize {
        self.k * (self.m + 1)
    }

    /// Number of distinct subcell faces; periodic meshes identify the two ends.
    pub fn faces(&self) -> usize {
        match self.bc {
            Boundary::Periodic => self.subcells(),
            Boundary::ZeroGradient => self.subcells() + 1,
        }
    }

    /// Global face index of flux point `f` of element `e`.
    pub fn face(&self, e: usize, f: usize) -> usize {
        (e * (self.m + 1) + f) % self.faces()
    }

    /// Width of subcell `s`.
    pub fn subcell_width(&self, s: usize) -> f64 {
        let (e, j) = (s / (self.m + 1), s % (self.m + 1));
        (self.flux_ref[j + 1] - self.flux_ref[j]) * self.widths[e]
    }

    /// Solution basis evaluated at the flux points, (M+2)×(M+1).
    pub fn interp_matrix(&self) -> &Mat {
        &self.interp
    }

    /// Derivative of the flux basis at the solution points, (M+1)×(M+2), in
    /// reference coordinates.
    pub fn deriv_matrix(&self) -> &Mat {
        &self.deriv
    }

    /// Maps solution-point values of one element to its subcell means.
    pub fn subcell_average_matrix(&self) -> &Mat {
        &self.sub_avg
    }

    pub fn subcell_average_inverse(&self) -> &Mat {
        &self.sub_avg_inv
    }
}
