//! `fgs`: batch driver for simulations, convergence studies, phase diagrams
//! and pattern statistics.

use clap::{Args, Parser, Subcommand, ValueEnum};
use fgs_core::io::csv::Table;
use fgs_core::io::{load_config, load_preset, preset_names, read_snapshot, SimulationConfig, SolverKind};
use fgs_core::patterns::{detect_spots_relative, fit_scaling, peaks_table, read_peaks, rdf, DEFAULT_BIN_WIDTH};
use fgs_core::solver::{run, FieldPair};
use fgs_core::stability::{phase_scan, phase_table};
use fgs_core::verifier::{convergence_study, Problem, Refinement, SourceSampling, StudyConfig, StudyKind};
use fgs_core::{Error, Result};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "fgs", version, about = "Fractional Gray-Scott solver toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate a configured system and write snapshots and diagnostics.
    Simulate(SimulateArgs),
    /// Refinement study for the manufactured or self-referenced problem.
    Converge(ConvergeArgs),
    /// Classify a (kappa, F) grid into phase-diagram regions.
    Phase(PhaseArgs),
    /// Spot detection and radial distribution function of a snapshot's v.
    Rdf(RdfArgs),
    /// Fit r = A exp(-beta/alpha) to an alpha,r1,r2 table.
    FitScaling(FitArgs),
    /// Run a configuration with both discretizations and compare patterns.
    CrossCheck(CrossArgs),
    /// Build, preset and format information.
    Info,
}

#[derive(Args, Debug)]
struct Source {
    /// Configuration file.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    /// Name of a shipped preset (see `fgs info`).
    #[arg(long)]
    preset: Option<String>,
}

impl Source {
    fn load(&self) -> Result<SimulationConfig> {
        match (&self.config, &self.preset) {
            (Some(path), _) => load_config(path),
            (None, Some(name)) => load_preset(name),
            (None, None) => unreachable!("clap requires one source"),
        }
    }
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    source: Source,
    /// Output directory; overrides the configured one.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    solver: Option<SolverArg>,
    /// Abort when a norm bound is exceeded.
    #[arg(long)]
    strict_bounds: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SolverArg {
    Primary,
    Cross,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Spatial,
    Temporal,
    Coupled,
}

#[derive(Args, Debug)]
struct ConvergeArgs {
    /// 1: manufactured solution; 2: sine data with unit source, fine-grid reference.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    example: u8,
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Fractional orders (comma separated).
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<f64>,
    /// Partitions per axis for each level (1/h).
    #[arg(long, value_delimiter = ',')]
    h_inv: Option<Vec<usize>>,
    /// Steps to t = 1 for each level (1/tau).
    #[arg(long, value_delimiter = ',')]
    tau_inv: Option<Vec<usize>>,
    /// Reference partitions for example 2 (tau = h on the reference grid).
    #[arg(long, default_value_t = 256)]
    reference: usize,
    #[arg(long, value_enum, default_value_t = SolverArg::Primary)]
    solver: SolverArg,
    /// Write the rate table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PhaseArgs {
    #[arg(long, default_value_t = 400)]
    nk: usize,
    #[arg(long, default_value_t = 400)]
    nf: usize,
    #[arg(long, default_value_t = 0.08)]
    kappa_max: f64,
    #[arg(long, default_value_t = 0.3)]
    f_max: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RdfArgs {
    #[arg(long)]
    snapshot: PathBuf,
    /// Spot threshold as a fraction of max(v).
    #[arg(long, default_value_t = 0.3)]
    threshold_frac: f64,
    #[arg(long, default_value_t = DEFAULT_BIN_WIDTH)]
    bin_width: f64,
    /// Defaults to half the domain diagonal.
    #[arg(long)]
    r_max: Option<f64>,
    /// Write the r,g table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Append alpha,r1,r2 to this table (created with a header if missing).
    #[arg(long)]
    peaks_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[arg(long)]
    input: PathBuf,
    /// Peak column to fit.
    #[arg(long, default_value = "r1")]
    column: String,
}

#[derive(Args, Debug)]
struct CrossArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0.3)]
    threshold_frac: f64,
    #[arg(long, default_value_t = DEFAULT_BIN_WIDTH)]
    bin_width: f64,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        return report(&e);
    }
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(&e),
    }
}

fn report(e: &Error) -> ExitCode {
    eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
    ExitCode::FAILURE
}

/// `FGS_THREADS` bounds the worker pool; 0 or unset means one per core.
fn configure_threads() -> Result<()> {
    let n = match std::env::var("FGS_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::Config(format!("FGS_THREADS must be a non-negative integer, got {v:?}")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Simulate(a) => simulate(a),
        Command::Converge(a) => converge(a),
        Command::Phase(a) => phase(a),
        Command::Rdf(a) => rdf_cmd(a),
        Command::FitScaling(a) => fit(a),
        Command::CrossCheck(a) => cross_check(a),
        Command::Info => info(),
    }
}

fn emit(table: &Table, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => table.write(path),
        None => {
            print!("{}", table.render());
            Ok(())
        }
    }
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let mut cfg = a.source.load()?;
    if let Some(out) = a.out {
        cfg.output_dir = Some(out);
    }
    if let Some(s) = a.solver {
        cfg.solver = match s {
            SolverArg::Primary => SolverKind::Primary,
            SolverArg::Cross => SolverKind::Cross,
        };
    }
    cfg.strict_bounds |= a.strict_bounds;
    let traj = run(&cfg)?;
    let snapshots: Vec<_> = traj
        .snapshots
        .iter()
        .map(|s| json!({ "step": s.step, "t": s.t, "path": s.path }))
        .collect();
    println!(
        "{}",
        json!({
            "steps": cfg.time.steps(),
            "t_end": cfg.time.t_end(),
            "snapshots": snapshots,
            "bound_violations": traj.bound_violations,
            "picard_iterations": traj.picard_iterations,
        })
    );
    Ok(())
}

fn converge(a: ConvergeArgs) -> Result<()> {
    let kind = match a.kind {
        KindArg::Spatial => StudyKind::Spatial,
        KindArg::Temporal => StudyKind::Temporal,
        KindArg::Coupled => StudyKind::Coupled,
    };
    // defaults reproduce the reference error tables
    let (default_h, default_tau): (Vec<usize>, Vec<usize>) = match (a.example, kind) {
        (1, StudyKind::Spatial) => (vec![16, 32, 64], vec![3000]),
        (1, StudyKind::Temporal) => (vec![1024], vec![5, 10, 15, 20, 25]),
        (_, _) => (vec![16, 32, 64, 128], vec![16, 32, 64, 128]),
    };
    let h_inv = a.h_inv.unwrap_or(default_h);
    let tau_inv = a.tau_inv.unwrap_or(default_tau);
    let len = h_inv.len().max(tau_inv.len());
    let pick = |v: &[usize], i: usize| if v.len() == 1 { Some(v[0]) } else { v.get(i).copied() };
    let levels = (0..len)
        .map(|i| match (pick(&h_inv, i), pick(&tau_inv, i)) {
            (Some(partitions), Some(steps)) => Ok(Refinement { partitions, steps }),
            _ => Err(Error::Config(
                "--h-inv and --tau-inv must have equal lengths or one of them a single value".into(),
            )),
        })
        .collect::<Result<Vec<_>>>()?;
    let problem = match a.example {
        1 => Problem::Manufactured,
        _ => Problem::SineSelfReference {
            reference: Refinement {
                partitions: a.reference,
                steps: a.reference,
            },
        },
    };
    let config = StudyConfig {
        problem,
        scheme: match a.solver {
            SolverArg::Primary => SolverKind::Primary.scheme(),
            SolverArg::Cross => SolverKind::Cross.scheme(),
        },
        sampling: SourceSampling::Midpoint,
        t_end: 1.0,
    };
    let table = convergence_study(kind, &a.alpha, &levels, &config)?;
    emit(&table.to_table(), a.out.as_deref())
}

fn phase(a: PhaseArgs) -> Result<()> {
    let points = phase_scan((0.0, a.kappa_max), (0.0, a.f_max), a.nk, a.nf)?;
    emit(&phase_table(&points), a.out.as_deref())
}

struct Peaks {
    alpha: f64,
    spots: usize,
    r1: Option<f64>,
    r2: Option<f64>,
}

fn analyze(
    state: &FieldPair,
    domain: &fgs_core::Domain2D,
    alpha: f64,
    threshold_frac: f64,
    bin_width: f64,
    r_max: Option<f64>,
) -> Result<(Peaks, Option<fgs_core::patterns::RdfProfile>)> {
    let spots = detect_spots_relative(&state.v, domain, threshold_frac)?;
    let (a, b, c, d) = domain.bounds();
    let r_max = r_max.unwrap_or(0.5 * (b - a).hypot(d - c));
    if spots.count() < 2 {
        let peaks = Peaks {
            alpha,
            spots: spots.count(),
            r1: None,
            r2: None,
        };
        return Ok((peaks, None));
    }
    let profile = rdf(&spots, bin_width, r_max)?;
    let peaks = Peaks {
        alpha,
        spots: spots.count(),
        r1: profile.r1,
        r2: profile.r2,
    };
    Ok((peaks, Some(profile)))
}

fn rdf_cmd(a: RdfArgs) -> Result<()> {
    let snap = read_snapshot(&a.snapshot)?;
    let (peaks, profile) = analyze(&snap.state, &snap.domain, snap.alpha, a.threshold_frac, a.bin_width, a.r_max)?;
    let profile = profile.ok_or(Error::TooFewSamples {
        required: 2,
        actual: peaks.spots,
    })?;
    match &a.out {
        Some(path) => profile.to_table().write(path)?,
        None => print!("{}", profile.to_table().render()),
    }
    if let Some(path) = &a.peaks_out {
        let mut rows: Vec<(f64, Option<f64>, Option<f64>)> = if path.exists() {
            let t = Table::read(path)?;
            let (al, r1, r2) = (t.numeric_column("alpha")?, t.numeric_column("r1")?, t.numeric_column("r2")?);
            al.into_iter()
                .zip(r1.into_iter().zip(r2))
                .filter_map(|(a, (r1, r2))| Some((a?, r1, r2)))
                .collect()
        } else {
            Vec::new()
        };
        rows.push((peaks.alpha, peaks.r1, peaks.r2));
        peaks_table(&rows).write(path)?;
    }
    eprintln!(
        "{}",
        json!({ "alpha": peaks.alpha, "spots": peaks.spots, "r1": peaks.r1, "r2": peaks.r2 })
    );
    Ok(())
}

fn fit(a: FitArgs) -> Result<()> {
    let samples = read_peaks(&a.input, &a.column)?;
    let fit = fit_scaling(&samples)?;
    print!("{}", fit.summary().render());
    Ok(())
}

fn cross_check(a: CrossArgs) -> Result<()> {
    let cfg = a.source.load()?;
    let mut results = Vec::new();
    for kind in [SolverKind::Primary, SolverKind::Cross] {
        let mut c = cfg.clone();
        c.solver = kind;
        c.output_dir = a.out.as_ref().map(|d| d.join(format!("{kind:?}").to_lowercase()));
        let traj = run(&c)?;
        let (peaks, _) = analyze(
            &traj.final_state,
            &c.domain,
            c.params.alpha().value(),
            a.threshold_frac,
            a.bin_width,
            None,
        )?;
        results.push((traj.final_state, peaks));
    }
    let diff = fgs_core::verifier::relative_l2(&results[1].0.v, &results[0].0.v);
    let agree = match (results[0].1.r1, results[1].1.r1) {
        (Some(p), Some(c)) => Some((p - c).abs() <= a.bin_width * (1.0 + 1e-9)),
        _ => None,
    };
    println!(
        "{}",
        json!({
            "primary": { "spots": results[0].1.spots, "r1": results[0].1.r1, "r2": results[0].1.r2 },
            "cross": { "spots": results[1].1.spots, "r1": results[1].1.r1, "r2": results[1].1.r2 },
            "rel_l2_v_difference": diff,
            "r1_within_one_bin": agree,
        })
    );
    Ok(())
}

fn info() -> Result<()> {
    println!(
        "{}",
        json!({
            "version": env!("CARGO_PKG_VERSION"),
            "presets": preset_names().collect::<Vec<_>>(),
            "threads": rayon::current_num_threads(),
            "snapshot_format": "FGS1: magic, u32 nx, u32 ny, f64 a b c d alpha t, (nx-1)(ny-1) f64 u then v, little-endian",
            "diagnostics_header": "step,t,norm_u_sq,norm_w_sq,bound_u,bound_w",
        })
    );
    Ok(())
}
