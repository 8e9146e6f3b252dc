use super::c5::{C5Constants, C5Rhs};
use super::LabError;
use crate::aderops::{FnRhs, OdeRhs};
use std::fmt;
use std::sync::Arc;

pub type ExactFn = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// An initial value problem u' = G(t, u), u(0) = u₀ on [0, T].
#[derive(Clone)]
pub struct OdeProblem {
    pub name: String,
    pub rhs: Arc<dyn OdeRhs>,
    pub u0: Vec<f64>,
    pub t_final: f64,
    pub exact: Option<ExactFn>,
}

impl fmt::Debug for OdeProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OdeProblem")
            .field("name", &self.name)
            .field("dim", &self.u0.len())
            .field("t_final", &self.t_final)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

/// u' = −5u + v, v' = 5u − v with (u, v)(0) = (0.9, 0.1) on [0, 1].
///
/// u + v is conserved and the single nonzero eigenvalue is −6, so
/// u(t) = u₀ + (1 − e^{−6t})(−5u₀ + v₀)/6 and v = 1 − u for u₀ + v₀ = 1.
pub fn problem_linear2x2() -> OdeProblem {
    let (u0, v0) = (0.9, 0.1);
    let rhs = FnRhs::autonomous(2, |_t, u: &[f64], out: &mut [f64]| {
        out[0] = -5.0 * u[0] + u[1];
        out[1] = 5.0 * u[0] - u[1];
    });
    let exact = move |t: f64| {
        let du = -(-6.0 * t).exp_m1() * (-5.0 * u0 + v0) / 6.0;
        vec![u0 + du, v0 - du]
    };
    OdeProblem {
        name: "linear2x2".into(),
        rhs: Arc::new(rhs),
        u0: vec![u0, v0],
        t_final: 1.0,
        exact: Some(Arc::new(exact)),
    }
}

/// u' = −u + cos t, u(0) = 1 on [0, 1]; u(t) = (cos t + sin t)/2 + e^{−t}/2.
pub fn problem_cosine() -> OdeProblem {
    let rhs = FnRhs::new(1, |t, u: &[f64], out: &mut [f64]| out[0] = -u[0] + t.cos());
    OdeProblem {
        name: "cosine".into(),
        rhs: Arc::new(rhs),
        u0: vec![1.0],
        t_final: 1.0,
        exact: Some(Arc::new(|t: f64| vec![0.5 * (t.cos() + t.sin()) + 0.5 * (-t).exp()])),
    }
}

/// u' = λu, u(0) = 1 on [0, T].
pub fn problem_dahlquist(lambda: f64, t_final: f64) -> OdeProblem {
    let rhs = FnRhs::autonomous(1, move |_t, u: &[f64], out: &mut [f64]| out[0] = lambda * u[0]);
    OdeProblem {
        name: "dahlquist".into(),
        rhs: Arc::new(rhs),
        u0: vec![1.0],
        t_final,
        exact: Some(Arc::new(move |t: f64| vec![(lambda * t).exp()])),
    }
}

/// DETEST C5 on [0, 20] (time unit 100 days) with the bundled constants.
pub fn problem_c5() -> OdeProblem {
    problem_c5_with(&C5Constants::bundled())
}

pub fn problem_c5_with(c: &C5Constants) -> OdeProblem {
    OdeProblem { name: "c5".into(), rhs: Arc::new(C5Rhs::new(c)), u0: c.initial_state(), t_final: 20.0, exact: None }
}

/// Looks up a problem by name.
pub fn problem_by_name(name: &str) -> Result<OdeProblem, LabError> {
    match name {
        "linear2x2" => Ok(problem_linear2x2()),
        "cosine" => Ok(problem_cosine()),
        "dahlquist" => Ok(problem_dahlquist(-1.0, 1.0)),
        "c5" => Ok(problem_c5()),
        _ => Err(LabError::UnknownProblem(name.to_string())),
    }
}
