//! High-order one-step time integration with ADER schemes.
//!
//! The crate covers the full pipeline from subtimenode construction to
//! applications:
//!
//! - [`timebasis`]: node families, Lagrange bases and quadrature on [0,1];
//! - [`aderops`]: the ADER matrices, the classical and ladder iterations
//!   (ADERu, ADERdu, ADER-L²) and p-adaptive stopping;
//! - [`rkview`]: Runge–Kutta export, order conditions, stability and stage
//!   counts;
//! - [`odelab`]: benchmark ODEs and convergence/timing studies;
//! - [`sd1d`]: a 1D spectral-difference driver with an a-posteriori subcell
//!   limiter.
//!
//! ```
//! use aderkit::{ader_step, build_ladder, FnRhs, NodeKind, Variant};
//!
//! let ladder = build_ladder(NodeKind::GaussLobatto, Variant::AderDu, 6).unwrap();
//! let rhs = FnRhs::autonomous(1, |_t, u: &[f64], out: &mut [f64]| out[0] = -u[0]);
//! let u1 = ader_step(&ladder, &rhs, &[1.0], 0.0, 0.1).unwrap();
//! assert!((u1[0] - (-0.1f64).exp()).abs() < 1e-8);
//! ```

pub mod aderops;
pub mod linalg;
pub mod odelab;
pub mod rkview;
pub mod sd1d;
pub mod timebasis;

pub use aderops::{
    ader_step, ader_step_adaptive, build_ladder, AdaptiveLadder, AderError, AderOperator, FnRhs, IterationLadder,
    OdeRhs, StepError, Variant,
};
pub use linalg::Mat;
pub use rkview::ButcherTableau;
pub use timebasis::{make_nodes, make_quadrature, NodeKind, NodeSet, QuadratureRule};
