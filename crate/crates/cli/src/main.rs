//! `aderkit` command-line front end.
//!
//! Exit codes: 0 on success, 1 when a run fails (step failure, I/O), 2 on
//! usage errors (bad flags, unknown problem, invalid scheme combination).

use aderkit::odelab::{
    fitted_slope, fmt17, problem_by_name, records_from_cells, reference_final, run_cell, speedup_study,
    write_study_csv, StudyCell, StudyConfig,
};
use aderkit::rkview::{explicit_tableau, max_real_step, stability_region_boundary, TableauJson};
use aderkit::sd1d::{run_problem, sd_problem_by_name, write_snapshot_csv, SdRunConfig};
use aderkit::{build_ladder, NodeKind, Variant};
use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "aderkit", version, about = "ADER time integration: tableaux, stability, ODE and PDE studies")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Export the explicit Butcher tableau of one scheme as JSON.
    Tableau(TableauArgs),
    /// Real-axis step bounds and stability region boundaries.
    Stability(StabilityArgs),
    /// Error and observed order over a list of time steps.
    Convergence(ConvergenceArgs),
    /// Wall-clock and stage-count speed-ups over classical ADER.
    Speedup(SpeedupArgs),
    /// One spectral-difference run with snapshot CSV and metadata JSON.
    Pde(PdeArgs),
    /// p-adaptive runs over a list of time steps.
    Adaptive(AdaptiveArgs),
}

#[derive(Args, Debug)]
struct Scheme {
    /// Node family: equi, glb or glg.
    #[arg(long, default_value = "glb")]
    kind: String,
    /// Scheme: cader, ader, aderu, aderdu or aderl2.
    #[arg(long, default_value = "aderdu")]
    variant: String,
}

#[derive(Args, Debug)]
struct TableauArgs {
    #[command(flatten)]
    scheme: Scheme,
    #[arg(long)]
    order: usize,
    /// Write the JSON here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct StabilityArgs {
    /// Orders, e.g. `1..12`, `3,5,7` or `6`.
    #[arg(long, default_value = "1..12")]
    orders: String,
    /// Rays sampled on each region boundary; 0 skips the boundary file.
    #[arg(long, default_value_t = 0)]
    boundary_points: usize,
    /// CSV `order,re,im,theta` of the sampled boundaries.
    #[arg(long)]
    boundary: Option<PathBuf>,
    /// CSV `order,dt_bound`; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConvergenceArgs {
    #[arg(long)]
    problem: String,
    #[command(flatten)]
    scheme: Scheme,
    #[arg(long, default_value = "3..6")]
    orders: String,
    /// Time steps, e.g. `1/8,1/16,1/32` or `0.1,0.05`.
    #[arg(long, default_value = "1/8,1/16,1/32,1/64,1/128")]
    dts: String,
    /// Worker threads for the study cells.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SpeedupArgs {
    #[arg(long, default_value = "c5")]
    problem: String,
    #[arg(long, default_value = "glb")]
    kind: String,
    #[arg(long, default_value = "5..9")]
    orders: String,
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    #[arg(long, default_value_t = 5)]
    repeats: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PdeArgs {
    /// advection, sound or sod.
    #[arg(long)]
    problem: String,
    #[command(flatten)]
    scheme: Scheme,
    /// Space-time order M+1.
    #[arg(long, default_value_t = 3)]
    order: usize,
    #[arg(long, default_value_t = 32)]
    cells: usize,
    /// Courant number; the problem default when absent.
    #[arg(long)]
    cfl: Option<f64>,
    /// Force the subcell limiter on or off.
    #[arg(long)]
    limiter: Option<bool>,
    /// Snapshot CSV; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Run metadata JSON.
    #[arg(long)]
    meta: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AdaptiveArgs {
    #[arg(long, default_value = "linear2x2")]
    problem: String,
    #[command(flatten)]
    scheme: Scheme,
    #[arg(long, default_value_t = 1e-8)]
    eps: f64,
    #[arg(long, default_value_t = 15)]
    p_max: usize,
    #[arg(long, default_value = "1/4,1/8,1/16,1/32,1/64")]
    dts: String,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Run(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Run(e)
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Tableau(a) => cmd_tableau(a),
        Cmd::Stability(a) => cmd_stability(a),
        Cmd::Convergence(a) => cmd_convergence(a),
        Cmd::Speedup(a) => cmd_speedup(a),
        Cmd::Pde(a) => cmd_pde(a),
        Cmd::Adaptive(a) => cmd_adaptive(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        // a closed stdout (e.g. piped into `head`) is not a failure
        Err(Failure::Run(e)) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(Failure::Run(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
            || c.downcast_ref::<serde_json::Error>().and_then(|e| e.io_error_kind()) == Some(io::ErrorKind::BrokenPipe)
    })
}

impl Scheme {
    fn parse(&self) -> Result<(NodeKind, Variant), Failure> {
        let kind: NodeKind = self.kind.parse().map_err(usage)?;
        let variant = parse_variant(&self.variant)?;
        Ok((kind, variant))
    }
}

/// ADER-L² and ADERdu produce identical steps, so the cheaper engine runs.
fn parse_variant(s: &str) -> Result<Variant, Failure> {
    match s.parse().map_err(usage)? {
        Variant::AderL2 => {
            eprintln!("note: aderl2 is equivalent to aderdu; running the aderdu engine");
            Ok(Variant::AderDu)
        }
        v => Ok(v),
    }
}

/// `a..b` (inclusive), `a..=b`, comma lists and single values.
fn parse_orders(s: &str) -> Result<Vec<usize>, Failure> {
    let bad = || usage(format!("invalid order list '{s}'"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let out = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        (a..=b).collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

/// Comma list of positive step sizes written as decimals or `p/q`.
fn parse_dts(s: &str) -> Result<Vec<f64>, Failure> {
    let bad = || usage(format!("invalid dt list '{s}'"));
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let v = match t.split_once('/') {
                Some((p, q)) => p.trim().parse::<f64>().ok().zip(q.trim().parse::<f64>().ok()).map(|(p, q)| p / q),
                None => t.parse::<f64>().ok(),
            };
            v.filter(|v| v.is_finite() && *v > 0.0).ok_or_else(bad)
        })
        .collect()
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn create(p: &Path) -> Result<File, Failure> {
    if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(File::create(p).with_context(|| format!("creating {}", p.display()))?)
}

fn cmd_tableau(a: TableauArgs) -> Result<(), Failure> {
    let (kind, variant) = a.scheme.parse()?;
    let ladder = build_ladder(kind, variant, a.order).map_err(usage)?;
    let t = explicit_tableau(&ladder);
    println!("stages={}", t.stages());
    let json = TableauJson::new(&t, variant.short_name(), kind.short_name(), a.order);
    let mut out = sink(&a.output)?;
    serde_json::to_writer_pretty(&mut out, &json).context("writing tableau")?;
    writeln!(out).context("writing tableau")?;
    Ok(())
}

fn cmd_stability(a: StabilityArgs) -> Result<(), Failure> {
    let orders = parse_orders(&a.orders)?;
    if orders.contains(&0) {
        return Err(usage("orders start at 1"));
    }
    let mut w = csv::Writer::from_writer(sink(&a.output)?);
    w.write_record(["order", "dt_bound"]).context("writing csv")?;
    for &p in &orders {
        w.write_record([p.to_string(), fmt17(max_real_step(p))]).context("writing csv")?;
    }
    w.flush().context("writing csv")?;
    if let Some(path) = &a.boundary {
        let n = a.boundary_points.max(2);
        let mut w = csv::Writer::from_writer(BufWriter::new(create(path)?));
        w.write_record(["order", "re", "im", "theta"]).context("writing csv")?;
        for &p in &orders {
            for b in stability_region_boundary(p, n) {
                w.write_record([p.to_string(), fmt17(b.re), fmt17(b.im), fmt17(b.theta)]).context("writing csv")?;
            }
        }
        w.flush().context("writing csv")?;
    }
    Ok(())
}

fn run_cells(problem_name: &str, configs: &[StudyConfig], dts: &[f64], jobs: usize) -> Result<Vec<StudyCell>, Failure> {
    let problem = problem_by_name(problem_name).map_err(usage)?;
    for c in configs {
        c.stepper().map_err(usage)?;
    }
    for &dt in dts {
        aderkit::odelab::steps_for(problem.t_final, dt).map_err(usage)?;
    }
    let reference = reference_final(&problem).context("reference solution")?;
    let tasks: Vec<(StudyConfig, f64)> = configs.iter().flat_map(|&c| dts.iter().map(move |&dt| (c, dt))).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().context("worker pool")?;
    let cells = pool.install(|| {
        tasks.par_iter().map(|(c, dt)| run_cell(&problem, c, *dt, &reference)).collect::<Result<Vec<_>, _>>()
    });
    Ok(cells.context("study run")?)
}

fn cmd_convergence(a: ConvergenceArgs) -> Result<(), Failure> {
    let (kind, variant) = a.scheme.parse()?;
    let dts = parse_dts(&a.dts)?;
    let configs: Vec<StudyConfig> =
        parse_orders(&a.orders)?.into_iter().map(|p| StudyConfig::fixed(kind, variant, p)).collect();
    let cells = run_cells(&a.problem, &configs, &dts, a.jobs)?;
    write_study_csv(sink(&a.output)?, &cells).context("writing csv")?;
    for r in records_from_cells(&configs, &dts, &cells) {
        let (d, e): (Vec<f64>, Vec<f64>) = r.dts.iter().zip(&r.errors).filter(|(_, e)| **e > 0.0).unzip();
        let slope = if d.len() >= 2 { fitted_slope(&d, &e) } else { f64::NAN };
        eprintln!("{kind} {variant} P={}: fitted order {slope:.3}", r.config.order);
    }
    Ok(())
}

fn cmd_adaptive(a: AdaptiveArgs) -> Result<(), Failure> {
    let (kind, variant) = a.scheme.parse()?;
    let dts = parse_dts(&a.dts)?;
    let configs = [StudyConfig::adaptive(kind, variant, a.eps, a.p_max)];
    let cells = run_cells(&a.problem, &configs, &dts, a.jobs)?;
    write_study_csv(sink(&a.output)?, &cells).context("writing csv")?;
    Ok(())
}

fn cmd_speedup(a: SpeedupArgs) -> Result<(), Failure> {
    let kind: NodeKind = a.kind.parse().map_err(usage)?;
    let orders = parse_orders(&a.orders)?;
    let problem = problem_by_name(&a.problem).map_err(usage)?;
    for &p in &orders {
        build_ladder(kind, Variant::Classical, p).map_err(usage)?;
    }
    if a.steps == 0 {
        return Err(usage("--steps must be positive"));
    }
    let rows = speedup_study(&problem, &orders, kind, a.steps, a.repeats).context("speed-up study")?;
    let mut w = csv::Writer::from_writer(sink(&a.output)?);
    let names = ["cader", "ader", "aderu", "aderdu"];
    let mut header = vec!["order".to_string()];
    header.extend(names.iter().map(|n| format!("stages_{n}")));
    header.extend(names.iter().map(|n| format!("seconds_{n}")));
    header.extend(names[1..].iter().map(|n| format!("theoretical_{n}")));
    header.extend(names[1..].iter().map(|n| format!("numerical_{n}")));
    w.write_record(&header).context("writing csv")?;
    for r in rows {
        let mut rec = vec![r.order.to_string()];
        rec.extend(r.stages.iter().map(|s| s.to_string()));
        rec.extend(r.seconds.iter().map(|&s| fmt17(s)));
        rec.extend(r.theoretical.iter().map(|&s| fmt17(s)));
        rec.extend(r.numerical.iter().map(|&s| fmt17(s)));
        w.write_record(&rec).context("writing csv")?;
    }
    w.flush().context("writing csv")?;
    Ok(())
}

fn cmd_pde(a: PdeArgs) -> Result<(), Failure> {
    let (kind, variant) = a.scheme.parse()?;
    let problem = sd_problem_by_name(&a.problem).map_err(usage)?;
    if a.order < 2 {
        return Err(usage("--order must be at least 2"));
    }
    if let Some(c) = a.cfl.filter(|c| !(*c > 0.0 && *c <= 1.0)) {
        return Err(usage(format!("--cfl {c} outside (0, 1]")));
    }
    let mut cfg = SdRunConfig::new(a.cells, a.order - 1, kind, variant);
    cfg.cfl = a.cfl;
    cfg.limiter = a.limiter;
    let run = run_problem(&problem, &cfg).context("pde run")?;
    let sys = problem.sys.as_ref();
    if !run.admissible(sys) {
        return Err(Failure::Run(anyhow::anyhow!("final state is not admissible")));
    }
    write_snapshot_csv(sink(&a.output)?, &run.mesh, sys, &run.state).context("writing snapshot")?;
    let meta = run.meta(&problem, &cfg);
    if let Some(p) = &a.meta {
        let mut f = BufWriter::new(create(p)?);
        serde_json::to_writer_pretty(&mut f, &meta).context("writing metadata")?;
        writeln!(f).context("writing metadata")?;
    }
    eprintln!(
        "{} K={} M={} {kind} {variant}: {} steps, {} limiter activations{}",
        meta.problem,
        meta.k,
        meta.m,
        meta.steps,
        meta.limiter_activations,
        meta.error.map(|e| format!(", L2 error {e:.3e}")).unwrap_or_default()
    );
    Ok(())
}
