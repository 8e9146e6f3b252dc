use super::limiter::{step_limited, step_unlimited, LimiterConfig};
use super::mesh::{build_mesh, Boundary, SdMesh};
use super::scheme::cfl_dt;
use super::system::{Euler, HyperbolicSystem, LinearAdvection};
use super::SdError;
use crate::aderops::{build_ladder, Variant};
use crate::timebasis::NodeKind;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

pub type InitFn = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// Reference value of one primitive variable at (x, t).
#[derive(Clone)]
pub struct SdExact {
    /// Index into [`HyperbolicSystem::primitives`].
    pub column: usize,
    pub f: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

/// A 1D PDE test case: system, domain, initial data in conserved variables
/// and default run parameters.
#[derive(Clone)]
pub struct SdProblem {
    pub name: String,
    pub sys: Arc<dyn HyperbolicSystem>,
    pub domain: (f64, f64),
    pub bc: Boundary,
    pub t_final: f64,
    pub cfl: f64,
    pub limiter: Option<LimiterConfig>,
    pub init: InitFn,
    pub exact: Option<SdExact>,
}

impl std::fmt::Debug for SdProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SdProblem")
            .field("name", &self.name)
            .field("sys", &self.sys)
            .field("t_final", &self.t_final)
            .field("cfl", &self.cfl)
            .finish()
    }
}

/// u_t + u_x = 0 on [0, 1], periodic, u₀ = sin(2πx), one period.
pub fn advection_sine() -> SdProblem {
    SdProblem {
        name: "advection".into(),
        sys: Arc::new(LinearAdvection { speed: 1.0 }),
        domain: (0.0, 1.0),
        bc: Boundary::Periodic,
        t_final: 1.0,
        cfl: 0.8,
        limiter: None,
        init: Arc::new(|x| vec![(2.0 * PI * x).sin()]),
        exact: Some(SdExact { column: 0, f: Arc::new(|x, t| (2.0 * PI * (x - t)).sin()) }),
    }
}

pub const SOUND_AMPLITUDE: f64 = 1e-6;
pub const SOUND_WAVENUMBER: f64 = 20.0 * PI;

/// Small-amplitude acoustic wave on a uniform state (ρ, v, p) = (1, 0, 1),
/// γ = 1.4, compared against the second-order perturbative velocity
/// v = A sin φ − A²(γ+1)/4 · kt · sin 2φ with φ = kx − c₀kt, the expansion
/// of a right-moving simple wave.
pub fn euler_sound_wave() -> SdProblem {
    let euler = Euler::default();
    let g = euler.gamma;
    let (a, k) = (SOUND_AMPLITUDE, SOUND_WAVENUMBER);
    let c0 = g.sqrt();
    let omega = k * c0;
    SdProblem {
        name: "soundwave".into(),
        sys: Arc::new(euler),
        domain: (0.0, 1.0),
        bc: Boundary::Periodic,
        t_final: 1.0 / (c0 * k),
        cfl: 0.4,
        limiter: None,
        init: Arc::new(move |x| {
            let s = a * (k * x).sin();
            euler.conserved(1.0 + s / c0, s, 1.0 + g * s / c0).to_vec()
        }),
        exact: Some(SdExact {
            column: 1,
            f: Arc::new(move |x, t| {
                let ph = k * x - omega * t;
                a * ph.sin() - a * a * (g + 1.0) / 4.0 * k * t * (2.0 * ph).sin()
            }),
        }),
    }
}

/// Shock tube on [0, 1] with zero-gradient boundaries:
/// (ρ, v, p) = (1, 1, 1) for x < 0.5 and (0.1, 1, 0.125) otherwise.
pub fn euler_sod() -> SdProblem {
    let euler = Euler::default();
    SdProblem {
        name: "sod".into(),
        sys: Arc::new(euler),
        domain: (0.0, 1.0),
        bc: Boundary::ZeroGradient,
        t_final: 0.2,
        cfl: 0.4,
        limiter: Some(LimiterConfig::default()),
        init: Arc::new(move |x| {
            if x < 0.5 { euler.conserved(1.0, 1.0, 1.0) } else { euler.conserved(0.1, 1.0, 0.125) }.to_vec()
        }),
        exact: None,
    }
}

pub fn sd_problem_by_name(name: &str) -> Result<SdProblem, SdError> {
    match name.to_ascii_lowercase().as_str() {
        "advection" | "advection_sine" => Ok(advection_sine()),
        "soundwave" | "sound_wave" | "euler_sound_wave" => Ok(euler_sound_wave()),
        "sod" | "euler_sod" => Ok(euler_sod()),
        _ => Err(SdError::UnknownProblem(name.to_string())),
    }
}

/// Discretization and scheme choices for one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SdRunConfig {
    pub elements: usize,
    pub degree: usize,
    pub kind: NodeKind,
    pub variant: Variant,
    /// ADER order; M+1 when absent.
    pub order: Option<usize>,
    /// Overrides the problem's Courant number.
    pub cfl: Option<f64>,
    /// Forces the limiter on or off; the problem decides when absent.
    pub limiter: Option<bool>,
}

impl SdRunConfig {
    pub fn new(elements: usize, degree: usize, kind: NodeKind, variant: Variant) -> Self {
        Self { elements, degree, kind, variant, order: None, cfl: None, limiter: None }
    }
}

#[derive(Debug, Clone)]
pub struct SdRun {
    pub mesh: SdMesh,
    pub state: Vec<f64>,
    pub t: f64,
    pub steps: usize,
    /// Flagged subcells per step (empty without limiter).
    pub flagged: Vec<usize>,
    pub limited_elements: usize,
    pub seconds: f64,
    pub error: Option<f64>,
}

/// Run metadata written next to solution snapshots.
#[derive(Debug, Clone, Serialize)]
pub struct SdRunMeta {
    pub problem: String,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub variant: Variant,
    pub kind: NodeKind,
    pub order: usize,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub steps: usize,
    pub limiter_activations: usize,
    pub max_flagged_fraction: f64,
    pub seconds: f64,
    pub error: Option<f64>,
}

/// Nodal interpolation of the problem's initial data.
pub fn initial_state(problem: &SdProblem, mesh: &SdMesh) -> Vec<f64> {
    mesh.solution_points().into_iter().flat_map(|x| (problem.init)(x)).collect()
}

pub fn run_problem(problem: &SdProblem, cfg: &SdRunConfig) -> Result<SdRun, SdError> {
    let mesh = build_mesh(cfg.elements, cfg.degree, problem.domain, problem.bc)?;
    let ladder = build_ladder(cfg.kind, cfg.variant, cfg.order.unwrap_or(cfg.degree + 1))?;
    let limiter = match cfg.limiter {
        Some(false) => None,
        Some(true) => Some(problem.limiter.unwrap_or_default()),
        None => problem.limiter,
    };
    let sys = problem.sys.as_ref();
    let c = cfg.cfl.unwrap_or(problem.cfl);
    let mut u = initial_state(problem, &mesh);
    let mut t = 0.0;
    let mut steps = 0;
    let mut flagged = Vec::new();
    let mut limited_elements = 0;
    let start = Instant::now();
    while t < problem.t_final {
        let dt_cfl = cfl_dt(&mesh, sys, &u, c)?;
        let remaining = problem.t_final - t;
        // absorb a sliver of roundoff instead of taking a vanishing final step
        let dt = if dt_cfl >= remaining * (1.0 - 1e-12) { remaining } else { dt_cfl };
        u = match &limiter {
            None => step_unlimited(&mesh, sys, &u, &ladder, dt),
            Some(lc) => step_limited(&mesh, sys, &u, &ladder, dt, lc).map(|s| {
                flagged.push(s.flagged_subcells);
                limited_elements += s.limited_elements;
                s.state
            }),
        }
        .map_err(|e| e.at_step(steps))?;
        t = if dt == remaining { problem.t_final } else { t + dt };
        steps += 1;
    }
    let seconds = start.elapsed().as_secs_f64();
    let error = problem.exact.as_ref().map(|ex| l2_error(&mesh, sys, &u, ex, t));
    Ok(SdRun { mesh, state: u, t, steps, flagged, limited_elements, seconds, error })
}

/// Quadrature L² norm over the domain of primitive `column` minus the
/// reference, using the solution points as Gauss nodes.
pub fn l2_error<S: HyperbolicSystem + ?Sized>(mesh: &SdMesh, sys: &S, u: &[f64], exact: &SdExact, t: f64) -> f64 {
    let q = sys.n_vars();
    let np = mesh.points_per_element();
    let x = mesh.solution_points();
    let w = mesh.solution_weights();
    let mut acc = 0.0;
    for (i, xi) in x.iter().enumerate() {
        let e = i / np;
        let v = sys.primitives(&u[i * q..(i + 1) * q])[exact.column];
        acc += mesh.widths()[e] * w[i % np] * (v - (exact.f)(*xi, t)).powi(2);
    }
    acc.sqrt()
}

impl SdRun {
    pub fn meta(&self, problem: &SdProblem, cfg: &SdRunConfig) -> SdRunMeta {
        let total = self.mesh.subcells() as f64;
        SdRunMeta {
            problem: problem.name.clone(),
            k: cfg.elements,
            m: cfg.degree,
            variant: cfg.variant,
            kind: cfg.kind,
            order: cfg.order.unwrap_or(cfg.degree + 1),
            c: cfg.cfl.unwrap_or(problem.cfl),
            t: self.t,
            steps: self.steps,
            limiter_activations: self.flagged.iter().sum(),
            max_flagged_fraction: self.flagged.iter().map(|&f| f as f64 / total).fold(0.0, f64::max),
            seconds: self.seconds,
            error: self.error,
        }
    }

    /// True when every solution point is physically admissible.
    pub fn admissible(&self, sys: &dyn HyperbolicSystem) -> bool {
        self.state.chunks(sys.n_vars()).all(|s| sys.is_admissible(s))
    }
}

/// Writes `x,<primitives>` rows at the solution points, e.g. `x,rho,v,p`.
pub fn write_snapshot_csv<W: std::io::Write>(
    out: W,
    mesh: &SdMesh,
    sys: &dyn HyperbolicSystem,
    u: &[f64],
) -> Result<(), SdError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["x"];
    header.extend_from_slice(sys.primitive_names());
    w.write_record(&header)?;
    let q = sys.n_vars();
    for (i, x) in mesh.solution_points().into_iter().enumerate() {
        let mut row = vec![crate::odelab::fmt17(x)];
        row.extend(sys.primitives(&u[i * q..(i + 1) * q]).into_iter().map(crate::odelab::fmt17));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| SdError::Io(e.to_string()))?;
    Ok(())
}
