//! ADER operators, iteration ladders and the fixed-point stepping engine.
//!
//! One step solves the weak-in-time system B·ū = r + Δt·Λ·G(ū) on M+1
//! subtimenodes by explicit iteration ū⁽ᵖ⁾ = uₙ + Δt·A·G(ū⁽ᵖ⁻¹⁾) with
//! A = B⁻¹Λ. The ladder variants raise M from iteration to iteration so that
//! early, low-accuracy sweeps run on fewer nodes.
//!
//! States are stored node-major: the Q components of node m occupy
//! `[m*Q, (m+1)*Q)`.

mod adaptive;
mod engine;
mod ladder;
mod operator;

pub use adaptive::{ader_step_adaptive, AdaptiveLadder, AdaptiveStep, DEFAULT_P_MAX};
pub use engine::{ader_step, ader_trace, FnRhs, OdeRhs, StepTrace};
pub use ladder::{build_ladder, target_degree, Embedding, IterationLadder, LadderLevel, Variant, GHOST_ROW_TOL};
pub use operator::{build_operator, default_quadrature, embed_matrix, galerkin_cross_matrix, AderOperator};

use crate::linalg::SingularMatrix;
use crate::timebasis::BasisError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AderError {
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error("ADER matrix B is singular: {0}")]
    SingularB(#[from] SingularMatrix),
    #[error("quadrature exact to degree {got} but B needs degree {required}")]
    InsufficientQuadrature { required: usize, got: usize },
    #[error("order {order} is not available for variant {variant}")]
    InvalidOrder { variant: Variant, order: usize },
    #[error("variant {0} has no adaptive form (use aderu, aderdu or aderl2)")]
    NotAdaptive(Variant),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("unknown variant '{0}' (expected cader, ader, aderu, aderdu or aderl2)")]
    UnknownVariant(String),
    #[error(transparent)]
    Step(#[from] StepError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    #[error("non-finite state after iteration {iteration}")]
    NonFinite { iteration: usize },
}
