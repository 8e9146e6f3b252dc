//! Benchmark ODE problems, a uniform-step driver, and convergence and
//! timing studies.

mod c5;
mod driver;
mod problems;
mod study;

pub use c5::{Body, C5Constants, C5Rhs, C5_DATA};
pub use driver::{integrate, integrate_to, IntegrationResult, Stepper};
pub use problems::{
    problem_by_name, problem_c5, problem_c5_with, problem_cosine, problem_dahlquist, problem_linear2x2, ExactFn,
    OdeProblem,
};
pub use study::{
    convergence_study, error_norm, fitted_slope, fmt17, observed_orders, records_from_cells, reference_final,
    reference_solve, run_cell, speedup_study, steps_for, write_study_csv, ConvergenceRecord, SpeedupRow, StudyCell,
    StudyConfig, CACHE_ENV, REFERENCE_ORDER, REFERENCE_STEPS, SPEEDUP_VARIANTS, STUDY_CSV_HEADER,
};

use crate::aderops::AderError;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error(transparent)]
    Ader(#[from] AderError),
    #[error("step {step} failed: non-finite state after iteration {iteration}")]
    StepFailed { step: usize, iteration: usize },
    #[error("n_steps must be at least 1")]
    NoSteps,
    #[error("dt={dt} does not divide the interval [0, {t_final}] into whole steps")]
    BadStepSize { dt: f64, t_final: f64 },
    #[error("unknown problem '{0}'")]
    UnknownProblem(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}
