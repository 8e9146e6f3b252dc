//! One-dimensional spectral-difference (SD) discretization of hyperbolic
//! conservation laws, advanced in time with any ADER variant, plus an
//! a-posteriori subcell limiter for shocks.
//!
//! State vectors are laid out element by element, then solution point, then
//! component.

mod limiter;
mod mesh;
mod problems;
mod scheme;
mod system;

pub use limiter::{final_weights, step_limited, step_unlimited, subcell_means, DmpStencil, LimitedStep, LimiterConfig};
pub use mesh::{build_mesh, Boundary, SdMesh};
pub use problems::{
    advection_sine, euler_sod, euler_sound_wave, initial_state, l2_error, run_problem, sd_problem_by_name,
    write_snapshot_csv, InitFn, SdExact, SdProblem, SdRun, SdRunConfig, SdRunMeta, SOUND_AMPLITUDE, SOUND_WAVENUMBER,
};
pub use scheme::{cfl_dt, face_fluxes, rhs_from_fluxes, rusanov, semidiscrete_rhs, SdOde};
pub use system::{Euler, HyperbolicSystem, LinearAdvection};

use crate::aderops::AderError;
use crate::timebasis::BasisError;

#[derive(Debug, thiserror::Error)]
pub enum SdError {
    #[error("need at least 3 elements, got {0}")]
    TooFewElements(usize),
    #[error("spatial degree must be at least 1, got {0}")]
    InvalidDegree(usize),
    #[error("empty domain [{0}, {1}]")]
    BadDomain(f64, f64),
    #[error("subcell averaging matrix is singular")]
    SingularSubcellMap,
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Ader(#[from] AderError),
    #[error("non-finite flux in element {element}")]
    NonFiniteFlux { element: usize },
    #[error("Courant number {0} outside (0, 1]")]
    BadCfl(f64),
    #[error("maximum wave speed is zero or not finite")]
    NoWaveSpeed,
    #[error("non-finite state after iteration {iteration}")]
    StepFailed { iteration: usize },
    #[error("first-order fallback left subcell {subcell} inadmissible; reduce the time step")]
    ParachuteFailed { subcell: usize },
    #[error("step {step}: {source}")]
    AtStep { step: usize, source: Box<SdError> },
    #[error("unknown problem '{0}'")]
    UnknownProblem(String),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("io error: {0}")]
    Io(String),
}

impl SdError {
    pub fn at_step(self, step: usize) -> Self {
        SdError::AtStep { step, source: Box::new(self) }
    }
}
