use super::problems::OdeProblem;
use super::LabError;
use crate::aderops::{ader_trace, AdaptiveLadder, IterationLadder};
use std::time::Instant;

/// How each step is taken.
#[derive(Debug, Clone)]
pub enum Stepper {
    /// A fixed number of iterations per step.
    Fixed(IterationLadder),
    /// p-adaptive iterations with relative tolerance `eps`.
    Adaptive { ladder: AdaptiveLadder, eps: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationResult {
    pub state: Vec<f64>,
    pub seconds: f64,
    pub rhs_evals: usize,
    /// Mean and standard deviation of the iterations used per step
    /// (adaptive mode; constant P otherwise).
    pub p_mean: f64,
    pub p_std: f64,
}

/// Integrates `problem` to its final time with `n_steps` uniform steps.
pub fn integrate(problem: &OdeProblem, stepper: &Stepper, n_steps: usize) -> Result<IntegrationResult, LabError> {
    integrate_to(problem, stepper, n_steps, problem.t_final)
}

/// As [`integrate`], but to an arbitrary final time.
pub fn integrate_to(
    problem: &OdeProblem,
    stepper: &Stepper,
    n_steps: usize,
    t_final: f64,
) -> Result<IntegrationResult, LabError> {
    if n_steps == 0 {
        return Err(LabError::NoSteps);
    }
    let dt = t_final / n_steps as f64;
    let rhs = problem.rhs.as_ref();
    let mut u = problem.u0.clone();
    let mut comp = vec![0.0; u.len()];
    let mut evals = 0;
    let mut p_sum = 0.0;
    let mut p_sq = 0.0;
    let start = Instant::now();
    for n in 0..n_steps {
        let t = n as f64 * dt;
        let p = match stepper {
            Stepper::Fixed(ladder) => {
                let tr = ader_trace(ladder, rhs, &u, t, dt, false);
                if let Some(iteration) = tr.non_finite_at {
                    return Err(LabError::StepFailed { step: n, iteration });
                }
                evals += tr.rhs_evals;
                kahan_add(&mut u, &mut comp, &tr.increment);
                ladder.order()
            }
            Stepper::Adaptive { ladder, eps } => {
                let s = ladder.step(rhs, &u, t, dt, *eps).map_err(
                    |crate::aderops::StepError::NonFinite { iteration }| LabError::StepFailed { step: n, iteration },
                )?;
                evals += s.rhs_evals;
                kahan_add(&mut u, &mut comp, &s.increment);
                s.p_used
            }
        } as f64;
        p_sum += p;
        p_sq += p * p;
    }
    let seconds = start.elapsed().as_secs_f64();
    let nf = n_steps as f64;
    let p_mean = p_sum / nf;
    let p_std = (p_sq / nf - p_mean * p_mean).max(0.0).sqrt();
    Ok(IntegrationResult { state: u, seconds, rhs_evals: evals, p_mean, p_std })
}

/// u += d with Kahan compensation carried in `comp`.
fn kahan_add(u: &mut [f64], comp: &mut [f64], d: &[f64]) {
    for ((x, c), &di) in u.iter_mut().zip(comp.iter_mut()).zip(d) {
        let y = di - *c;
        let t = *x + y;
        *c = (t - *x) - y;
        *x = t;
    }
}
