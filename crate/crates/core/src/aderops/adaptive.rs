use super::engine::{OdeRhs, Sweep};
use super::ladder::{levels_for_degrees, LadderLevel, Variant};
use super::{AderError, StepError};
use crate::timebasis::NodeKind;

pub const DEFAULT_P_MAX: usize = 15;

/// Growing ladder for p-adaptive stepping: iteration p runs on degree p
/// (after a first iteration on degree 1), so every iteration gains one order.
#[derive(Debug, Clone)]
pub struct AdaptiveLadder {
    kind: NodeKind,
    variant: Variant,
    levels: Vec<LadderLevel>,
}

/// Result of one adaptive step.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveStep {
    pub u_next: Vec<f64>,
    /// uₙ₊₁ − uₙ.
    pub increment: Vec<f64>,
    pub p_used: usize,
    pub rhs_evals: usize,
}

impl AdaptiveLadder {
    pub fn new(kind: NodeKind, variant: Variant, p_max: usize) -> Result<Self, AderError> {
        if !variant.is_ladder() {
            return Err(AderError::NotAdaptive(variant));
        }
        if p_max < 2 {
            return Err(AderError::InvalidOrder { variant, order: p_max });
        }
        let degrees: Vec<usize> = (1..=p_max).collect();
        let levels = levels_for_degrees(kind, variant, &degrees)?;
        Ok(Self { kind, variant, levels })
    }

    pub fn kind(&self) -> NodeKind {
        self.kind
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn p_max(&self) -> usize {
        self.levels.len()
    }

    /// Iterates until the relative change of the end-of-step value drops to
    /// `eps` (2-norm), or p reaches p_max. A zero end value switches to the
    /// absolute test.
    pub fn step<R: OdeRhs + ?Sized>(
        &self,
        rhs: &R,
        u_n: &[f64],
        t_n: f64,
        dt: f64,
        eps: f64,
    ) -> Result<AdaptiveStep, StepError> {
        let mut sweep = Sweep::new(rhs, u_n, t_n, dt, 2);
        let mut prev: Option<Vec<f64>> = None;
        for (i, level) in self.levels.iter().enumerate() {
            let p = i + 1;
            sweep.iterate(level);
            if !sweep.delta.iter().all(|v| v.is_finite()) {
                return Err(StepError::NonFinite { iteration: p });
            }
            let inc = sweep.end_increment(level.operator.end_eval());
            let current: Vec<f64> = u_n.iter().zip(&inc).map(|(u, d)| u + d).collect();
            if let Some(prev) = &prev {
                let diff = norm2(current.iter().zip(prev).map(|(a, b)| a - b));
                let size = norm2(current.iter().copied());
                let converged = if size == 0.0 { diff <= eps } else { diff / size <= eps };
                if converged || p == self.levels.len() {
                    return Ok(AdaptiveStep { u_next: current, increment: inc, p_used: p, rhs_evals: sweep.evals });
                }
            }
            prev = Some(current);
        }
        unreachable!("p_max >= 2 guarantees a comparison at the last level")
    }
}

/// Convenience wrapper building the growing ladder for a single step.
#[allow(clippy::too_many_arguments)]
pub fn ader_step_adaptive<R: OdeRhs + ?Sized>(
    kind: NodeKind,
    variant: Variant,
    rhs: &R,
    u_n: &[f64],
    t_n: f64,
    dt: f64,
    eps: f64,
    p_max: usize,
) -> Result<(Vec<f64>, usize), AderError> {
    if !(eps > 0.0) {
        return Err(AderError::InvalidTolerance(eps));
    }
    let ladder = AdaptiveLadder::new(kind, variant, p_max)?;
    let s = ladder.step(rhs, u_n, t_n, dt, eps)?;
    Ok((s.u_next, s.p_used))
}

fn norm2(it: impl Iterator<Item = f64>) -> f64 {
    it.map(|v| v * v).sum::<f64>().sqrt()
}
