//! `leaksim`: circuit dumps, Monte Carlo sweeps, fault scans and result
//! analysis for leakage on the toric code.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use leaksim_core::circuit::build_variant;
use leaksim_core::harness::fit::fit_exponent;
use leaksim_core::harness::sweep::{write_breakdown, LogicalBreakdown};
use leaksim_core::harness::{
    compare_variants, emit_plot_data, read_rows, run_sweep, write_rows, ExperimentConfig,
};
use leaksim_core::noise::{SidePolicy, SiteFilter};
use leaksim_core::scan::{scan_program, ScanPolicy};
use leaksim_core::{Error, Variant};
use log::info;

#[derive(Parser)]
#[command(
    name = "leaksim",
    version,
    about = "Leakage-aware toric-code syndrome extraction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump a circuit program as JSON lines.
    Emit(EmitArgs),
    /// Run a Monte Carlo sweep from a config file.
    Run(RunArgs),
    /// Exhaustive single or double fault scan.
    Scan(ScanArgs),
    /// Fit the logical error exponent of a result table.
    Fit(FitArgs),
    /// Compare two result tables point by point.
    Compare(CompareArgs),
    /// Write plot-ready series and fit overlays.
    PlotData(PlotArgs),
}

#[derive(Args)]
struct CircuitArgs {
    #[arg(long)]
    variant: Variant,
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// Syndrome rounds; defaults to `d`.
    #[arg(long)]
    rounds: Option<usize>,
}

#[derive(Args)]
struct EmitArgs {
    #[command(flatten)]
    circuit: CircuitArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Result CSV; a `.logicals.csv` sidecar is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    circuit: CircuitArgs,
    /// Take the leakage policy from this experiment config instead of the
    /// variant default.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), default_value_t = 1)]
    max_faults: u8,
    #[arg(long)]
    side_policy: Option<SidePolicy>,
    #[arg(long)]
    site_filter: Option<SiteFilter>,
    #[arg(long)]
    init_leakage: Option<bool>,
    /// Seed for sampled assignment spaces.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    table: PathBuf,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    p_min: Option<f64>,
    #[arg(long)]
    p_max: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    table: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_table(path: &Path) -> anyhow::Result<Vec<leaksim_core::harness::ResultRow>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(read_rows(f)?)
}

fn write_json<T: serde::Serialize>(value: &T, path: Option<&Path>) -> anyhow::Result<()> {
    let mut out = output(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn sidecar(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map_or_else(|| "results".into(), |s| s.to_string_lossy().into_owned());
    path.with_file_name(format!("{stem}.logicals.csv"))
}

fn emit(args: EmitArgs) -> anyhow::Result<()> {
    let c = &args.circuit;
    let program = build_variant(c.variant, c.d, c.rounds.unwrap_or(c.d))?;
    let mut out = output(args.out.as_deref())?;
    program.emit(&mut out)?;
    out.flush()?;
    Ok(())
}

fn run(args: RunArgs) -> anyhow::Result<()> {
    let mut config = ExperimentConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Some(w) = args.workers {
        config.workers = w;
    }
    if args.out.is_some() {
        config.output = args.out;
    }
    let points = run_sweep(&config)?;
    let rows: Vec<_> = points.iter().map(|p| p.row.clone()).collect();
    let breakdown: Vec<LogicalBreakdown> = points.into_iter().map(|p| p.breakdown).collect();
    write_rows(&rows, output(config.output.as_deref())?)?;
    if let Some(path) = &config.output {
        let side = sidecar(path);
        write_breakdown(&breakdown, output(Some(&side))?)?;
        info!("wrote {} and {}", path.display(), side.display());
    }
    Ok(())
}

fn scan(args: ScanArgs) -> anyhow::Result<()> {
    let c = &args.circuit;
    let mut policy = match &args.config {
        Some(path) => {
            let config = ExperimentConfig::load(path)?;
            ScanPolicy::from_noise(&config.noise_at(config.p[0]))
        }
        None => ScanPolicy::for_variant(c.variant),
    };
    if let Some(s) = args.side_policy {
        policy.side_policy = s;
    }
    if let Some(f) = args.site_filter {
        policy.site_filter = f;
    }
    if let Some(i) = args.init_leakage {
        policy.init_leakage = i;
    }
    if let Some(seed) = args.seed {
        policy.sample_seed = seed;
    }
    if args.workers == 0 {
        return Err(Error::Config {
            field: "workers".into(),
            message: "must be at least 1".into(),
        }
        .into());
    }
    let program = build_variant(c.variant, c.d, c.rounds.unwrap_or(c.d))?;
    let pool = rayon_pool(args.workers)?;
    let verdict = pool.install(|| scan_program(&program, &policy, args.max_faults))?;
    info!(
        "{} d={}: {} specs, {} failing",
        verdict.variant,
        verdict.d,
        verdict.universe_size,
        verdict.failing_specs.len()
    );
    write_json(&verdict, args.out.as_deref())
}

fn rayon_pool(workers: usize) -> anyhow::Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()?)
}

fn fit(args: FitArgs) -> anyhow::Result<()> {
    let rows = read_table(&args.table)?;
    let window = match (args.p_min, args.p_max) {
        (None, None) => None,
        (lo, hi) => Some((lo.unwrap_or(0.0), hi.unwrap_or(f64::INFINITY))),
    };
    let result = fit_exponent(&rows, args.d, window)?;
    write_json(&result, args.out.as_deref())
}

fn compare(args: CompareArgs) -> anyhow::Result<()> {
    let a = read_table(&args.a)?;
    let b = read_table(&args.b)?;
    let report = compare_variants(&a, &b)?;
    write_json(&report, args.out.as_deref())
}

fn plot_data(args: PlotArgs) -> anyhow::Result<()> {
    let rows = read_table(&args.table)?;
    for path in emit_plot_data(&rows, &args.out)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn broken_pipe(err: &anyhow::Error) -> bool {
    err.chain().any(|e| {
        let kind = match e.downcast_ref::<Error>() {
            Some(Error::Io(io)) => Some(io.kind()),
            Some(Error::Json(j)) => j.io_error_kind(),
            _ => e
                .downcast_ref::<io::Error>()
                .map(io::Error::kind)
                .or_else(|| {
                    e.downcast_ref::<serde_json::Error>()
                        .and_then(|j| j.io_error_kind())
                }),
        };
        kind == Some(io::ErrorKind::BrokenPipe)
    })
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::Config { .. }
            | Error::InvalidDistance(_)
            | Error::InvalidCircuit(_)
            | Error::MismatchedGrids(_)
            | Error::CombinatorialBound { .. },
        ) => 2,
        Some(Error::InsufficientData(_) | Error::EmptyTable) => 3,
        _ => 1,
    }
}

fn run_cli<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code() as u8;
        }
    };
    let result = match cli.command {
        Command::Emit(a) => emit(a),
        Command::Run(a) => run(a),
        Command::Scan(a) => scan(a),
        Command::Fit(a) => fit(a),
        Command::Compare(a) => compare(a),
        Command::PlotData(a) => plot_data(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) if broken_pipe(&e) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    ExitCode::from(run_cli(std::env::args_os()))
}
