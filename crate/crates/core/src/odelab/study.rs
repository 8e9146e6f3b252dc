use super::driver::{integrate, IntegrationResult, Stepper};
use super::problems::OdeProblem;
use super::LabError;
use crate::aderops::{build_ladder, AdaptiveLadder, Variant};
use crate::rkview::stage_count;
use crate::timebasis::NodeKind;
use serde::Serialize;
use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Mutex, OnceLock};

pub const CACHE_ENV: &str = "ADERKIT_CACHE_DIR";
pub const REFERENCE_ORDER: usize = 9;
pub const REFERENCE_STEPS: usize = 256;

/// One scheme configuration of a study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StudyConfig {
    pub kind: NodeKind,
    pub variant: Variant,
    /// Order P for fixed ladders, p_max for adaptive runs.
    pub order: usize,
    /// Tolerance for adaptive runs.
    pub eps: Option<f64>,
}

impl StudyConfig {
    pub fn fixed(kind: NodeKind, variant: Variant, order: usize) -> Self {
        Self { kind, variant, order, eps: None }
    }

    pub fn adaptive(kind: NodeKind, variant: Variant, eps: f64, p_max: usize) -> Self {
        Self { kind, variant, order: p_max, eps: Some(eps) }
    }

    pub fn stepper(&self) -> Result<Stepper, LabError> {
        Ok(match self.eps {
            None => Stepper::Fixed(build_ladder(self.kind, self.variant, self.order)?),
            Some(eps) => Stepper::Adaptive { ladder: AdaptiveLadder::new(self.kind, self.variant, self.order)?, eps },
        })
    }
}

/// One (configuration, dt) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyCell {
    pub kind: NodeKind,
    pub variant: Variant,
    pub order: usize,
    pub dt: f64,
    pub error: f64,
    pub seconds: f64,
    pub p_mean: f64,
    pub p_std: f64,
}

/// Errors and observed orders of one configuration over a dt sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRecord {
    pub config: StudyConfig,
    pub dts: Vec<f64>,
    pub errors: Vec<f64>,
    /// log2(e(2dt)/e(dt)) for successive halvings (one fewer than `dts`).
    pub orders: Vec<f64>,
    pub seconds: Vec<f64>,
    pub p_mean: Vec<f64>,
    pub p_std: Vec<f64>,
}

impl ConvergenceRecord {
    pub fn cells(&self) -> Vec<StudyCell> {
        (0..self.dts.len())
            .map(|i| StudyCell {
                kind: self.config.kind,
                variant: self.config.variant,
                order: self.config.order,
                dt: self.dts[i],
                error: self.errors[i],
                seconds: self.seconds[i],
                p_mean: self.p_mean[i],
                p_std: self.p_std[i],
            })
            .collect()
    }

    /// Least-squares slope of log e against log dt.
    pub fn fitted_order(&self) -> f64 {
        fitted_slope(&self.dts, &self.errors)
    }
}

pub fn fitted_slope(dts: &[f64], errors: &[f64]) -> f64 {
    let x: Vec<f64> = dts.iter().map(|d| d.ln()).collect();
    let y: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

/// Discrete 2-norm of a − b.
pub fn error_norm(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Number of uniform steps for `dt` on [0, T].
pub fn steps_for(t_final: f64, dt: f64) -> Result<usize, LabError> {
    let n = t_final / dt;
    let r = n.round();
    if r < 1.0 || (n - r).abs() > 1e-9 * n.max(1.0) {
        return Err(LabError::BadStepSize { dt, t_final });
    }
    Ok(r as usize)
}

/// Reference final state: the exact solution when known, otherwise an
/// order-9 Gauss–Legendre ADER solve with 256 steps, cached in memory and,
/// when `ADERKIT_CACHE_DIR` is set, on disk.
pub fn reference_final(problem: &OdeProblem) -> Result<Vec<f64>, LabError> {
    if let Some(exact) = &problem.exact {
        return Ok(exact(problem.t_final));
    }
    reference_solve(problem, REFERENCE_ORDER, REFERENCE_STEPS)
}

pub fn reference_solve(problem: &OdeProblem, order: usize, steps: usize) -> Result<Vec<f64>, LabError> {
    static MEMO: OnceLock<Mutex<HashMap<String, Vec<f64>>>> = OnceLock::new();
    let key = format!("{}-glg-o{}-n{}", problem.name, order, steps);
    let memo = MEMO.get_or_init(Default::default);
    if let Some(v) = memo.lock().expect("memo lock").get(&key) {
        return Ok(v.clone());
    }
    let path = std::env::var_os(CACHE_ENV).map(|d| PathBuf::from(d).join(format!("ref-{key}.json")));
    if let Some(p) = &path {
        if let Ok(text) = std::fs::read_to_string(p) {
            if let Ok(v) = serde_json::from_str::<Vec<f64>>(&text) {
                if v.len() == problem.u0.len() {
                    memo.lock().expect("memo lock").insert(key, v.clone());
                    return Ok(v);
                }
            }
        }
    }
    let ladder = build_ladder(NodeKind::GaussLegendre, Variant::Ader, order)?;
    let v = integrate(problem, &Stepper::Fixed(ladder), steps)?.state;
    if let Some(p) = &path {
        if let Some(dir) = p.parent() {
            let _ = std::fs::create_dir_all(dir);
        }
        std::fs::write(p, serde_json::to_string(&v).expect("vector serializes"))
            .map_err(|e| LabError::Data(format!("cannot write cache {}: {e}", p.display())))?;
    }
    memo.lock().expect("memo lock").insert(key, v.clone());
    Ok(v)
}

/// Runs one cell against a precomputed reference.
pub fn run_cell(problem: &OdeProblem, config: &StudyConfig, dt: f64, reference: &[f64]) -> Result<StudyCell, LabError> {
    let n = steps_for(problem.t_final, dt)?;
    let r: IntegrationResult = integrate(problem, &config.stepper()?, n)?;
    Ok(StudyCell {
        kind: config.kind,
        variant: config.variant,
        order: config.order,
        dt,
        error: error_norm(&r.state, reference),
        seconds: r.seconds,
        p_mean: r.p_mean,
        p_std: r.p_std,
    })
}

/// Assembles per-configuration records from cells in (config, dt) order.
pub fn records_from_cells(configs: &[StudyConfig], dts: &[f64], cells: &[StudyCell]) -> Vec<ConvergenceRecord> {
    configs
        .iter()
        .enumerate()
        .map(|(i, &config)| {
            let row = &cells[i * dts.len()..(i + 1) * dts.len()];
            let errors: Vec<f64> = row.iter().map(|c| c.error).collect();
            ConvergenceRecord {
                config,
                dts: dts.to_vec(),
                orders: observed_orders(&errors),
                errors,
                seconds: row.iter().map(|c| c.seconds).collect(),
                p_mean: row.iter().map(|c| c.p_mean).collect(),
                p_std: row.iter().map(|c| c.p_std).collect(),
            }
        })
        .collect()
}

/// Serial convergence study over every (config, dt) pair.
pub fn convergence_study(
    problem: &OdeProblem,
    configs: &[StudyConfig],
    dts: &[f64],
) -> Result<Vec<ConvergenceRecord>, LabError> {
    let reference = reference_final(problem)?;
    let mut cells = Vec::with_capacity(configs.len() * dts.len());
    for config in configs {
        for &dt in dts {
            cells.push(run_cell(problem, config, dt, &reference)?);
        }
    }
    Ok(records_from_cells(configs, dts, &cells))
}

pub const STUDY_CSV_HEADER: [&str; 8] = ["kind", "variant", "order", "dt", "error", "seconds", "p_mean", "p_std"];

/// Formats a float with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes study cells as CSV with the header
/// `kind,variant,order,dt,error,seconds,p_mean,p_std`.
pub fn write_study_csv<W: std::io::Write>(out: W, cells: &[StudyCell]) -> Result<(), LabError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(STUDY_CSV_HEADER)?;
    for c in cells {
        w.write_record([
            c.kind.to_string(),
            c.variant.to_string(),
            c.order.to_string(),
            fmt17(c.dt),
            fmt17(c.error),
            fmt17(c.seconds),
            fmt17(c.p_mean),
            fmt17(c.p_std),
        ])?;
    }
    w.flush().map_err(|e| LabError::Data(format!("csv flush: {e}")))?;
    Ok(())
}

/// Theoretical and measured speed-ups at one order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeedupRow {
    pub order: usize,
    /// Stage counts of (Classical, Ader, AderU, AderDu).
    pub stages: [usize; 4],
    /// Best-of-repeats wall-clock seconds for the same variants.
    pub seconds: [f64; 4],
    /// Stage-count ratios of (Ader, AderU, AderDu) over Classical.
    pub theoretical: [f64; 3],
    /// Wall-clock ratios of (Ader, AderU, AderDu) over Classical.
    pub numerical: [f64; 3],
}

pub const SPEEDUP_VARIANTS: [Variant; 4] = [Variant::Classical, Variant::Ader, Variant::AderU, Variant::AderDu];

/// Times the four schemes at each order with `n_steps` steps, keeping the
/// fastest of `repeats` runs. Cells run serially to avoid contention.
pub fn speedup_study(
    problem: &OdeProblem,
    orders: &[usize],
    kind: NodeKind,
    n_steps: usize,
    repeats: usize,
) -> Result<Vec<SpeedupRow>, LabError> {
    let mut rows = Vec::with_capacity(orders.len());
    for &p in orders {
        let mut stages = [0; 4];
        let mut seconds = [f64::INFINITY; 4];
        let steppers: Vec<Stepper> =
            SPEEDUP_VARIANTS.iter().map(|&v| build_ladder(kind, v, p).map(Stepper::Fixed)).collect::<Result<_, _>>()?;
        for (i, &v) in SPEEDUP_VARIANTS.iter().enumerate() {
            stages[i] = stage_count(kind, v, p)?;
        }
        // interleave variants across repeats so drift affects all equally
        for _ in 0..repeats.max(1) {
            for (i, s) in steppers.iter().enumerate() {
                let r = integrate(problem, s, n_steps)?;
                seconds[i] = seconds[i].min(r.seconds);
            }
        }
        let theoretical = std::array::from_fn(|i| stages[0] as f64 / stages[i + 1] as f64);
        let numerical = std::array::from_fn(|i| seconds[0] / seconds[i + 1]);
        rows.push(SpeedupRow { order: p, stages, seconds, theoretical, numerical });
    }
    Ok(rows)
}
