use super::mesh::{Boundary, SdMesh};
use super::scheme::{face_fluxes, rusanov, SdOde};
use super::system::HyperbolicSystem;
use super::SdError;
use crate::aderops::{ader_trace, IterationLadder};

/// Tolerances of the troubled-subcell detector.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LimiterConfig {
    /// Relative relaxation of the density bounds, scaled by max − min.
    pub dmp_relative: f64,
    pub dmp_absolute: f64,
    pub stencil: DmpStencil,
}

/// Subcell means that bound a candidate in the maximum-principle check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DmpStencil {
    /// The subcell and its two neighbouring subcells.
    Subcells,
    /// All subcells of the element and of both neighbouring elements.
    Elements,
}

impl Default for LimiterConfig {
    fn default() -> Self {
        Self { dmp_relative: 1e-4, dmp_absolute: 1e-12, stencil: DmpStencil::Elements }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitedStep {
    pub state: Vec<f64>,
    /// Subcells flagged as troubled in at least one sub-step.
    pub flagged_subcells: usize,
    /// Elements rebuilt from subcell means because a low-order flux touched them.
    pub limited_elements: usize,
}

/// Weights b̃ of the final iteration: uₙ₊₁ = uₙ + Δt Σⱼ b̃ⱼ G(ūⱼ) over the
/// final iteration's G-inputs ūⱼ.
pub fn final_weights(ladder: &IterationLadder) -> Vec<f64> {
    let level = ladder.final_level();
    let end = level.operator.end_eval();
    let upd = level.update_matrix();
    let mut w = vec![0.0; upd.cols()];
    for (i, &e) in end.iter().enumerate() {
        if e == 0.0 || level.ghost_rows()[i] {
            continue;
        }
        for (j, &a) in upd.row(i).iter().enumerate() {
            w[j] += e * a;
        }
    }
    w
}

/// Unlimited ADER step of the SD semidiscretization.
pub fn step_unlimited<S: HyperbolicSystem + ?Sized>(
    mesh: &SdMesh,
    sys: &S,
    u: &[f64],
    ladder: &IterationLadder,
    dt: f64,
) -> Result<Vec<f64>, SdError> {
    let trace = ader_trace(ladder, &SdOde { mesh, sys }, u, 0.0, dt, false);
    match trace.non_finite_at {
        Some(iteration) => Err(SdError::StepFailed { iteration }),
        None => Ok(trace.u_next),
    }
}

/// ADER step followed by a-posteriori subcell limiting.
///
/// The high-order update is replayed as a sequence of first-order finite
/// volume sub-steps of size Δt·b̃ⱼ on the subcells, using high-order fluxes
/// built from the final iteration's inputs. A candidate subcell that loses
/// positivity or violates the density maximum principle has its own faces
/// and the next faces out replaced by Rusanov fluxes of the current subcell
/// means; flagging repeats within a sub-step until no new face changes.
/// Elements touched by a low-order face are rebuilt from their subcell
/// means, all others keep the high-order solution.
pub fn step_limited<S: HyperbolicSystem + ?Sized>(
    mesh: &SdMesh,
    sys: &S,
    u: &[f64],
    ladder: &IterationLadder,
    dt: f64,
    cfg: &LimiterConfig,
) -> Result<LimitedStep, SdError> {
    let trace = ader_trace(ladder, &SdOde { mesh, sys }, u, 0.0, dt, false);
    if let Some(iteration) = trace.non_finite_at {
        return Err(SdError::StepFailed { iteration });
    }
    let q = sys.n_vars();
    let np = mesh.points_per_element();
    let ns = mesh.subcells();
    let nfaces = mesh.faces();
    let dim = ns * q;
    let weights = final_weights(ladder);

    let mut bar = subcell_means(mesh, q, u);
    let mut lo_any = vec![false; nfaces];
    let mut flagged_any = vec![false; ns];
    let mut ho = vec![0.0; nfaces * q];
    let mut lo = vec![0.0; nfaces * q];
    let mut cand = vec![0.0; dim];

    for (j, &b) in weights.iter().enumerate() {
        if b == 0.0 {
            continue;
        }
        face_fluxes(mesh, sys, &trace.final_inputs[j * dim..(j + 1) * dim], &mut ho)?;
        low_order_fluxes(mesh, sys, &bar, &mut lo);
        let tau = dt * b;
        let mut use_lo = vec![false; nfaces];
        loop {
            for s in 0..ns {
                let (fl, fr) = (s, (s + 1) % nfaces);
                let h = mesh.subcell_width(s);
                for c in 0..q {
                    let left = if use_lo[fl] { lo[fl * q + c] } else { ho[fl * q + c] };
                    let right = if use_lo[fr] { lo[fr * q + c] } else { ho[fr * q + c] };
                    cand[s * q + c] = bar[s * q + c] - tau / h * (right - left);
                }
            }
            let mut changed = false;
            for s in 0..ns {
                let cs = &cand[s * q..(s + 1) * q];
                let positive = sys.is_admissible(cs);
                if positive && within_bounds(mesh, sys, &bar, q, s, cs, cfg) {
                    continue;
                }
                let (fl, fr) = (s, (s + 1) % nfaces);
                if !positive && use_lo[fl] && use_lo[fr] {
                    return Err(SdError::ParachuteFailed { subcell: s });
                }
                flagged_any[s] = true;
                for f in neighbour_faces(mesh, s) {
                    if !use_lo[f] {
                        use_lo[f] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        for (a, &l) in lo_any.iter_mut().zip(&use_lo) {
            *a |= l;
        }
        bar.copy_from_slice(&cand);
    }

    let mut state = trace.u_next;
    let inv = mesh.subcell_average_inverse();
    let mut limited = 0;
    for e in 0..mesh.elements() {
        if (0..=np).any(|f| lo_any[mesh.face(e, f)]) {
            limited += 1;
            inv.apply_blocks(&bar[e * np * q..(e + 1) * np * q], q, &mut state[e * np * q..(e + 1) * np * q]);
        }
    }
    if !state.iter().all(|v| v.is_finite()) {
        return Err(SdError::StepFailed { iteration: ladder.order() });
    }
    Ok(LimitedStep { state, flagged_subcells: flagged_any.iter().filter(|&&f| f).count(), limited_elements: limited })
}

/// Subcell means of every element.
pub fn subcell_means(mesh: &SdMesh, q: usize, u: &[f64]) -> Vec<f64> {
    let np = mesh.points_per_element();
    let r = mesh.subcell_average_matrix();
    let mut bar = vec![0.0; u.len()];
    for e in 0..mesh.elements() {
        r.apply_blocks(&u[e * np * q..(e + 1) * np * q], q, &mut bar[e * np * q..(e + 1) * np * q]);
    }
    bar
}

fn low_order_fluxes<S: HyperbolicSystem + ?Sized>(mesh: &SdMesh, sys: &S, bar: &[f64], out: &mut [f64]) {
    let q = sys.n_vars();
    let ns = mesh.subcells();
    for f in 0..mesh.faces() {
        let (l, r) = match mesh.boundary() {
            Boundary::Periodic => ((f + ns - 1) % ns, f),
            Boundary::ZeroGradient => (f.saturating_sub(1), f.min(ns - 1)),
        };
        rusanov(sys, &bar[l * q..(l + 1) * q], &bar[r * q..(r + 1) * q], &mut out[f * q..(f + 1) * q]);
    }
}

/// Faces i−3/2, i−1/2, i+1/2, i+3/2 of subcell i.
fn neighbour_faces(mesh: &SdMesh, s: usize) -> Vec<usize> {
    let nfaces = mesh.faces();
    let s = s as isize;
    (s - 1..=s + 2)
        .filter_map(|f| match mesh.boundary() {
            Boundary::Periodic => Some(f.rem_euclid(nfaces as isize) as usize),
            Boundary::ZeroGradient => (f >= 0 && f < nfaces as isize).then_some(f as usize),
        })
        .collect()
}

fn within_bounds<S: HyperbolicSystem + ?Sized>(
    mesh: &SdMesh,
    sys: &S,
    bar: &[f64],
    q: usize,
    s: usize,
    cand: &[f64],
    cfg: &LimiterConfig,
) -> bool {
    let np = mesh.points_per_element();
    let k = mesh.elements();
    let e = s / np;
    let elements: Vec<usize> = match (mesh.boundary(), cfg.stencil) {
        (_, DmpStencil::Subcells) => Vec::new(),
        (Boundary::Periodic, DmpStencil::Elements) => vec![(e + k - 1) % k, e, (e + 1) % k],
        (Boundary::ZeroGradient, DmpStencil::Elements) => (e.saturating_sub(1)..=(e + 1).min(k - 1)).collect(),
    };
    let ns = mesh.subcells();
    let neighbours: Vec<usize> = match (mesh.boundary(), cfg.stencil) {
        (_, DmpStencil::Elements) => elements.iter().flat_map(|&e| e * np..(e + 1) * np).collect(),
        (Boundary::Periodic, DmpStencil::Subcells) => vec![(s + ns - 1) % ns, s, (s + 1) % ns],
        (Boundary::ZeroGradient, DmpStencil::Subcells) => (s.saturating_sub(1)..=(s + 1).min(ns - 1)).collect(),
    };
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for n in neighbours {
        let d = sys.density(&bar[n * q..(n + 1) * q]);
        lo = lo.min(d);
        hi = hi.max(d);
    }
    let delta = cfg.dmp_relative * (hi - lo) + cfg.dmp_absolute;
    let d = sys.density(cand);
    d >= lo - delta && d <= hi + delta
}
