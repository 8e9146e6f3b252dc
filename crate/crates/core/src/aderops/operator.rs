use super::AderError;
use crate::linalg::{Lu, Mat};
use crate::timebasis::{make_quadrature, NodeKind, NodeSet, QuadratureRule};

const PIVOT_TOL: f64 = 1e-12;

/// The ADER matrices for one node set: B, Λ, A = B⁻¹Λ and ψ(1).
#[derive(Debug, Clone)]
pub struct AderOperator {
    nodes: NodeSet,
    b: Mat,
    lambda: Mat,
    a: Mat,
    end_eval: Vec<f64>,
    start_eval: Vec<f64>,
    quadrature_tag: NodeKind,
    lu: Lu,
}

impl AderOperator {
    /// Operator with the default quadrature policy (see [`default_quadrature`]).
    pub fn new(ns: &NodeSet) -> Result<Self, AderError> {
        build_operator(ns, &default_quadrature(ns)?)
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn degree(&self) -> usize {
        self.nodes.degree()
    }

    pub fn b(&self) -> &Mat {
        &self.b
    }

    pub fn lambda(&self) -> &Mat {
        &self.lambda
    }

    /// A = B⁻¹Λ.
    pub fn a(&self) -> &Mat {
        &self.a
    }

    /// ψ(1), the end-of-step evaluation vector.
    pub fn end_eval(&self) -> &[f64] {
        &self.end_eval
    }

    /// ψ(0), the right-hand side vector r = ψ(0)·uₙ of the weak form.
    pub fn start_eval(&self) -> &[f64] {
        &self.start_eval
    }

    pub fn quadrature_tag(&self) -> NodeKind {
        self.quadrature_tag
    }

    pub fn lu(&self) -> &Lu {
        &self.lu
    }

    /// Solves B·x = rhs.
    pub fn solve_b(&self, rhs: &Mat) -> Mat {
        self.lu.solve_mat(rhs)
    }

    /// b̃ᵀ = ψ(1)ᵀB⁻¹Λ, the weights of the final update.
    pub fn b_tilde(&self) -> Vec<f64> {
        self.a.vecmat(&self.end_eval)
    }
}

/// Quadrature used to assemble Λ: the Lobatto rule on the nodes themselves
/// for GLB nodes (giving a diagonal Λ), otherwise a Gauss–Legendre rule exact
/// for the degree-2M integrand.
pub fn default_quadrature(ns: &NodeSet) -> Result<QuadratureRule, AderError> {
    let m = ns.degree();
    let q = match ns.kind() {
        NodeKind::GaussLobatto => make_quadrature(NodeKind::GaussLobatto, m + 1)?,
        _ => make_quadrature(NodeKind::GaussLegendre, m + 1)?,
    };
    Ok(q)
}

/// Assembles B_{ℓm} = ψˡ(1)ψᵐ(1) − ∫ψˡ′ψᵐ and Λ_{ℓm} = ∫ψˡψᵐ with `quad`,
/// then A = B⁻¹Λ.
pub fn build_operator(ns: &NodeSet, quad: &QuadratureRule) -> Result<AderOperator, AderError> {
    let m = ns.degree();
    if quad.degree_of_exactness + 1 < 2 * m {
        return Err(AderError::InsufficientQuadrature { required: 2 * m - 1, got: quad.degree_of_exactness });
    }
    let n = m + 1;
    let end_eval = ns.basis_at(1.0);
    let start_eval = ns.basis_at(0.0);
    let vals: Vec<Vec<f64>> = quad.points.iter().map(|&x| ns.basis_at(x)).collect();
    let ders: Vec<Vec<f64>> = quad.points.iter().map(|&x| ns.basis_deriv_at(x)).collect();
    let mut b = Mat::zeros(n, n);
    let mut lambda = Mat::zeros(n, n);
    for l in 0..n {
        for j in 0..n {
            let mut stiff = 0.0;
            let mut mass = 0.0;
            for (q, &w) in quad.weights.iter().enumerate() {
                stiff += w * ders[q][l] * vals[q][j];
                mass += w * vals[q][l] * vals[q][j];
            }
            b[(l, j)] = end_eval[l] * end_eval[j] - stiff;
            lambda[(l, j)] = mass;
        }
    }
    let lu = Lu::factor(&b, PIVOT_TOL)?;
    let a = lu.solve_mat(&lambda);
    Ok(AderOperator { nodes: ns.clone(), b, lambda, a, end_eval, start_eval, quadrature_tag: quad.kind, lu })
}

/// Interpolation matrix H_{ℓm} = ψᵐ_from(ξˡ_to), mapping nodal values on
/// `from` to nodal values on `to`.
pub fn embed_matrix(from: &NodeSet, to: &NodeSet) -> Mat {
    Mat::from_fn(to.len(), from.len(), |l, m| from.lagrange(m, to.nodes()[l]))
}

/// Galerkin cross mass matrix Λ_{ℓm} = ∫ψˡ_fine ψᵐ_coarse computed with `quad`.
pub fn galerkin_cross_matrix(coarse: &NodeSet, fine: &NodeSet, quad: &QuadratureRule) -> Mat {
    let cv: Vec<Vec<f64>> = quad.points.iter().map(|&x| coarse.basis_at(x)).collect();
    let fv: Vec<Vec<f64>> = quad.points.iter().map(|&x| fine.basis_at(x)).collect();
    Mat::from_fn(fine.len(), coarse.len(), |l, m| {
        quad.weights.iter().enumerate().map(|(q, &w)| w * fv[q][l] * cv[q][m]).sum()
    })
}
