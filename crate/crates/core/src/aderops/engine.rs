use super::ladder::{IterationLadder, LadderLevel};
use super::StepError;

/// Right-hand side G(t, u) of an ODE system u' = G(t, u) with Q components.
pub trait OdeRhs: Send + Sync {
    fn dim(&self) -> usize;

    /// Writes G(t, u) into `out`. Must be free of side effects.
    fn eval(&self, t: f64, u: &[f64], out: &mut [f64]);

    /// True when G does not depend on t; lets the engine share evaluations
    /// of identical states.
    fn is_autonomous(&self) -> bool {
        false
    }

    /// Optional estimate of the spectral radius of ∂G/∂u.
    fn spectral_radius(&self, _t: f64, _u: &[f64]) -> Option<f64> {
        None
    }
}

impl<R: OdeRhs + ?Sized> OdeRhs for &R {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, t: f64, u: &[f64], out: &mut [f64]) {
        (**self).eval(t, u, out)
    }
    fn is_autonomous(&self) -> bool {
        (**self).is_autonomous()
    }
    fn spectral_radius(&self, t: f64, u: &[f64]) -> Option<f64> {
        (**self).spectral_radius(t, u)
    }
}

/// Adapts a closure `f(t, u, out)` into an [`OdeRhs`].
pub struct FnRhs<F> {
    dim: usize,
    autonomous: bool,
    f: F,
}

impl<F> FnRhs<F>
where
    F: Fn(f64, &[f64], &mut [f64]) + Send + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, autonomous: false, f }
    }

    pub fn autonomous(dim: usize, f: F) -> Self {
        Self { dim, autonomous: true, f }
    }
}

impl<F> OdeRhs for FnRhs<F>
where
    F: Fn(f64, &[f64], &mut [f64]) + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, t: f64, u: &[f64], out: &mut [f64]) {
        (self.f)(t, u, out)
    }
    fn is_autonomous(&self) -> bool {
        self.autonomous
    }
}

/// Everything one step produced, for callers that need more than uₙ₊₁.
#[derive(Debug, Clone)]
pub struct StepTrace {
    /// ū⁽⁰⁾, …, ū⁽ᴾ⁾ when recording was requested, otherwise empty.
    pub iterates: Vec<Vec<f64>>,
    /// States at which G was evaluated in the final iteration (node-major).
    pub final_inputs: Vec<f64>,
    pub u_next: Vec<f64>,
    /// uₙ₊₁ − uₙ, accumulated without forming uₙ₊₁ first.
    pub increment: Vec<f64>,
    pub rhs_evals: usize,
    /// First iteration (1-based) that produced a non-finite value.
    pub non_finite_at: Option<usize>,
}

/// One ADER step: exactly P fixed-point iterations from ū⁽⁰⁾ = uₙ followed by
/// uₙ₊₁ = ψ(1)ᵀū⁽ᴾ⁾.
pub fn ader_step<R: OdeRhs + ?Sized>(
    ladder: &IterationLadder,
    rhs: &R,
    u_n: &[f64],
    t_n: f64,
    dt: f64,
) -> Result<Vec<f64>, StepError> {
    let trace = ader_trace(ladder, rhs, u_n, t_n, dt, false);
    match trace.non_finite_at {
        Some(iteration) => Err(StepError::NonFinite { iteration }),
        None => Ok(trace.u_next),
    }
}

/// Runs all iterations without aborting on non-finite values.
pub fn ader_trace<R: OdeRhs + ?Sized>(
    ladder: &IterationLadder,
    rhs: &R,
    u_n: &[f64],
    t_n: f64,
    dt: f64,
    record: bool,
) -> StepTrace {
    let mut sweep = Sweep::new(rhs, u_n, t_n, dt, ladder.initial_nodes().len());
    let mut iterates = Vec::new();
    if record {
        iterates.push(sweep.states());
    }
    let mut non_finite_at = None;
    for (i, level) in ladder.schedule().iter().enumerate() {
        sweep.iterate(level);
        if record {
            iterates.push(sweep.states());
        }
        if non_finite_at.is_none() && !sweep.delta.iter().all(|v| v.is_finite()) {
            non_finite_at = Some(i + 1);
        }
    }
    let increment = sweep.end_increment(ladder.final_level().operator.end_eval());
    let u_next = u_n.iter().zip(&increment).map(|(u, d)| u + d).collect();
    StepTrace { iterates, final_inputs: sweep.inputs, u_next, increment, rhs_evals: sweep.evals, non_finite_at }
}

/// Mutable state of one step. Iterates are stored as increments
/// ū⁽ᵖ⁾ − uₙ so that small updates are not rounded against uₙ.
pub(crate) struct Sweep<'a, R: ?Sized> {
    rhs: &'a R,
    q: usize,
    u_n: &'a [f64],
    t_n: f64,
    dt: f64,
    pub(crate) delta: Vec<f64>,
    inputs: Vec<f64>,
    delta_in: Vec<f64>,
    g0: Option<Vec<f64>>,
    gvals: Vec<f64>,
    pub(crate) evals: usize,
}

impl<'a, R: OdeRhs + ?Sized> Sweep<'a, R> {
    pub(crate) fn new(rhs: &'a R, u_n: &'a [f64], t_n: f64, dt: f64, n0: usize) -> Self {
        let q = u_n.len();
        Self {
            rhs,
            q,
            u_n,
            t_n,
            dt,
            delta: vec![0.0; n0 * q],
            inputs: Vec::new(),
            delta_in: Vec::new(),
            g0: None,
            gvals: Vec::new(),
            evals: 0,
        }
    }

    /// Current iterate as full states.
    pub(crate) fn states(&self) -> Vec<f64> {
        self.delta.iter().enumerate().map(|(i, d)| self.u_n[i % self.q] + d).collect()
    }

    fn ensure_g0(&mut self) {
        if self.g0.is_none() {
            let mut g = vec![0.0; self.q];
            self.rhs.eval(self.t_n, self.u_n, &mut g);
            self.evals += 1;
            self.g0 = Some(g);
        }
    }

    pub(crate) fn iterate(&mut self, level: &LadderLevel) {
        let q = self.q;
        match &level.pre_embed {
            Some(h) => {
                self.delta_in.resize(h.rows() * q, 0.0);
                h.apply_blocks(&self.delta, q, &mut self.delta_in);
                // exact copies keep untouched nodes bitwise equal
                for (i, src) in level.pre_embed_source.iter().enumerate() {
                    if let Some(j) = *src {
                        self.delta_in[i * q..(i + 1) * q].copy_from_slice(&self.delta[j * q..(j + 1) * q]);
                    }
                }
            }
            None => self.delta_in.clone_from(&self.delta),
        }
        let n_in = level.input_nodes.len();
        let n_out = level.update.rows();
        let autonomous = self.rhs.is_autonomous();
        let pristine = |d: &[f64]| d.iter().all(|&v| v == 0.0);
        self.inputs.resize(n_in * q, 0.0);
        for (i, (x, d)) in self.inputs.iter_mut().zip(&self.delta_in).enumerate() {
            *x = self.u_n[i % q] + d;
        }
        let mut next = vec![0.0; n_out * q];

        if autonomous && self.delta_in.iter().all(|&v| v == 0.0) {
            // every input equals uₙ, so update·G = (update·1)·G(uₙ) = c·G(uₙ)
            self.ensure_g0();
            let g0 = self.g0.as_ref().expect("g0 set");
            for (i, &c) in level.output_nodes().iter().enumerate() {
                for k in 0..q {
                    next[i * q + k] = self.dt * c * g0[k];
                }
            }
            self.delta = next;
            return;
        }

        self.gvals.resize(n_in * q, 0.0);
        for j in 0..n_in {
            let c = level.input_nodes[j];
            if (c == 0.0 || autonomous) && pristine(&self.delta_in[j * q..(j + 1) * q]) {
                self.ensure_g0();
                let g0 = self.g0.as_ref().expect("g0 set");
                self.gvals[j * q..(j + 1) * q].copy_from_slice(g0);
            } else {
                self.rhs.eval(
                    self.t_n + c * self.dt,
                    &self.inputs[j * q..(j + 1) * q],
                    &mut self.gvals[j * q..(j + 1) * q],
                );
                self.evals += 1;
            }
        }
        level.update.apply_blocks(&self.gvals, q, &mut next);
        for i in 0..n_out {
            let row = &mut next[i * q..(i + 1) * q];
            if level.ghost_rows[i] {
                row.fill(0.0);
            } else {
                for r in row.iter_mut() {
                    *r *= self.dt;
                }
            }
        }
        self.delta = next;
    }

    /// ψ(1)ᵀ(ū − uₙ), relying on Σₘ ψᵐ(1) = 1.
    pub(crate) fn end_increment(&self, end_eval: &[f64]) -> Vec<f64> {
        let q = self.q;
        let mut out = vec![0.0; q];
        for (m, &e) in end_eval.iter().enumerate() {
            if e == 0.0 {
                continue;
            }
            for k in 0..q {
                out[k] += e * self.delta[m * q + k];
            }
        }
        out
    }
}
