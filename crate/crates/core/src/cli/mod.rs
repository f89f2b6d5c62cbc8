//! Command-line front end: `simulate`, `sweep`, `norms`, `patch-study`, `kernels`.
//!
//! Exit codes: 0 success, 1 validation, 2 numerical failure, 3 I/O.
//! Every failure prints one JSON line on standard error.

mod config;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use config::{parse_config, KernelSettings, NormSettings, PatchPreset, RunConfig, SimulateSettings};

use crate::error::{Error, ErrorKind, Result};
use crate::harness::{emit_patch_report, emit_report, endpoint_patch_study, parse_formats, run_sweep, Format};
use crate::littlewood_paley::DyadicFamily;
use crate::patches::{derivative_lower_bound_check, kernel_table, logspace, monotonicity_check};
use crate::spectral::Exponent;
use crate::transport::{read_snapshot, simulate, uniform_times, write_snapshot};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "QGSW_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "qgsw-out";

#[derive(Debug, Parser)]
#[command(name = "qgsw", version, about = "QGSW / Euler pseudo-spectral laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML run configuration; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config and QGSW_OUT_DIR).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Reserved; the dynamics are deterministic.
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated list of csv, json, svg.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve one trajectory and dump snapshots.
    Simulate(Common),
    /// Full λ-sweep against the Euler reference.
    Sweep(Common),
    /// Besov and X norms of a snapshot file.
    Norms {
        #[command(flatten)]
        common: Common,
        /// Snapshot to analyse (overrides `[norms] snapshot`).
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
    /// Ellipse or disc patch under both laws.
    PatchStudy(Common),
    /// Tabulate the kernels and check monotonicity.
    Kernels(Common),
}

struct Context {
    config: RunConfig,
    out: PathBuf,
    formats: Vec<Format>,
    threads: usize,
}

impl Context {
    fn new(common: &Common) -> Result<Self> {
        let config = match &common.config {
            Some(path) => parse_config(&fs::read_to_string(path).map_err(|e| with_path(e, path))?)?,
            None => parse_config("")?,
        };
        if common.threads == 0 {
            return Err(Error::param("threads", "must be at least 1"));
        }
        let formats = match &common.format {
            Some(list) => parse_formats(list)?,
            None => config.formats.clone(),
        };
        let out = common
            .out
            .clone()
            .or_else(|| config.output_dir.clone())
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
        Ok(Context {
            config,
            out,
            formats,
            threads: common.threads,
        })
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| Error::param("threads", e.to_string()))
    }

    fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    status: &'a str,
    exit_code: i32,
    kind: &'a str,
    message: String,
}

fn exit_code(kind: ErrorKind) -> i32 {
    match kind {
        ErrorKind::Validation => 1,
        ErrorKind::Numerical => 2,
        ErrorKind::Io => 3,
    }
}

fn report_error(kind: &str, code: i32, message: String) -> i32 {
    let d = Diagnostic {
        status: "error",
        exit_code: code,
        kind,
        message,
    };
    eprintln!("{}", serde_json::to_string(&d).expect("diagnostic serializes"));
    code
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            let message = e.kind().to_string();
            let detail = e.to_string();
            let first = detail.lines().next().unwrap_or_default().trim_start_matches("error: ");
            return report_error("usage", 1, if first.is_empty() { message } else { first.to_string() });
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            let kind = e.kind();
            let name = match kind {
                ErrorKind::Validation => "validation",
                ErrorKind::Numerical => "numerical",
                ErrorKind::Io => "io",
            };
            report_error(name, exit_code(kind), e.to_string())
        }
    }
}

fn execute(command: &Command) -> Result<()> {
    match command {
        Command::Simulate(common) => cmd_simulate(&Context::new(common)?),
        Command::Sweep(common) => cmd_sweep(&Context::new(common)?),
        Command::Norms { common, snapshot } => cmd_norms(&Context::new(common)?, snapshot.as_deref()),
        Command::PatchStudy(common) => cmd_patch_study(&Context::new(common)?),
        Command::Kernels(common) => cmd_kernels(&Context::new(common)?),
    }
}

fn with_path(e: std::io::Error, path: &Path) -> Error {
    Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn create_out(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

fn cmd_simulate(ctx: &Context) -> Result<()> {
    let s = &ctx.config.simulate;
    let sweep = &ctx.config.sweep;
    let grid = sweep.grid()?;
    let (omega0, mean) = sweep.initial.sample(&grid)?;
    let count = ((s.t_final * s.snapshots_per_unit_time as f64).round() as usize).max(1);
    let times = uniform_times(s.t_final, count);
    let traj = ctx
        .pool()?
        .install(|| simulate(&omega0, s.lambda, s.t_final, &sweep.solver, &times))?;

    create_out(&ctx.out)?;
    let mut index = csv::Writer::from_path(ctx.out.join("snapshots.csv"))?;
    index.write_record(["index", "t", "file"])?;
    for (i, (t, field)) in traj.times.iter().zip(&traj.snapshots).enumerate() {
        let name = format!("snapshot_{i:05}.qgsw");
        write_snapshot(ctx.out.join(&name), field)?;
        index.write_record([i.to_string(), t.to_string(), name])?;
    }
    index.flush()?;

    if ctx.wants(Format::Csv) {
        let mut w = csv::Writer::from_path(ctx.out.join("diagnostics.csv"))?;
        for d in &traj.diagnostics {
            w.serialize(d)?;
        }
        w.flush()?;
    }
    if ctx.wants(Format::Json) {
        let summary = serde_json::json!({
            "lambda": s.lambda,
            "t_final": s.t_final,
            "n": sweep.n,
            "length": sweep.length,
            "removed_mean": mean,
            "steps": traj.diagnostics.len() - 1,
            "times": traj.times,
            "diagnostics": traj.diagnostics,
        });
        fs::write(ctx.out.join("simulate.json"), serde_json::to_string_pretty(&summary)?)?;
    }
    println!(
        "simulated λ = {} to t = {} in {} steps; {} snapshots in {}",
        s.lambda,
        s.t_final,
        traj.diagnostics.len() - 1,
        traj.snapshots.len(),
        ctx.out.display()
    );
    Ok(())
}

fn cmd_sweep(ctx: &Context) -> Result<()> {
    let report = run_sweep(&ctx.config.sweep, ctx.threads)?;
    for path in emit_report(&report, &ctx.out, &ctx.formats)? {
        println!("wrote {}", path.display());
    }
    for fit in &report.fits {
        println!("fit {}: slope {:.4}", fit.norm, fit.exponent);
    }
    Ok(())
}

#[derive(Serialize)]
struct BesovValue {
    s: f64,
    p: Exponent,
    q: Exponent,
    value: f64,
}

#[derive(Serialize)]
struct NormsReport {
    snapshot: PathBuf,
    n: usize,
    length: f64,
    mean: f64,
    l1: f64,
    l2: f64,
    linf: f64,
    besov: Vec<BesovValue>,
    xnorm: Option<f64>,
}

fn cmd_norms(ctx: &Context, snapshot: Option<&Path>) -> Result<()> {
    let settings = &ctx.config.norms;
    let path = snapshot
        .map(Path::to_path_buf)
        .or_else(|| settings.snapshot.clone())
        .ok_or_else(|| Error::param("norms.snapshot", "no snapshot given (use --snapshot)"))?;
    let field = read_snapshot(&path).map_err(|e| match e {
        Error::Io(io) => with_path(io, &path),
        other => other,
    })?;
    let family = DyadicFamily::default();
    let xnorm = match settings.xnorm {
        Some((s, p, r)) => Some(family.x_norm(&field, s, p, r)?),
        None => None,
    };
    let report = NormsReport {
        snapshot: path,
        n: field.grid().n(),
        length: field.grid().length(),
        mean: field.mean(),
        l1: field.lp_norm(Exponent::Finite(1.0)),
        l2: field.l2_norm(),
        linf: field.max_abs(),
        besov: settings
            .besov
            .iter()
            .map(|b| BesovValue {
                s: b.s,
                p: b.p,
                q: b.q,
                value: family.besov_norm(&field, b),
            })
            .collect(),
        xnorm,
    };
    let json = serde_json::to_string_pretty(&report)?;
    if ctx.wants(Format::Json) {
        create_out(&ctx.out)?;
        fs::write(ctx.out.join("norms.json"), &json)?;
    }
    println!("{json}");
    Ok(())
}

fn cmd_patch_study(ctx: &Context) -> Result<()> {
    let cfg = &ctx.config.patch_study;
    let report = ctx.pool()?.install(|| endpoint_patch_study(cfg))?;
    for path in emit_patch_report(&report, &ctx.out, &ctx.formats)? {
        println!("wrote {}", path.display());
    }
    println!(
        "max sup difference {:.4}; window {:?}; exceeds threshold {} for at least {}: {}",
        report.max_sup_difference(),
        report.window,
        cfg.threshold,
        cfg.min_window,
        report.exceeds
    );
    Ok(())
}

fn cmd_kernels(ctx: &Context) -> Result<()> {
    let k = &ctx.config.kernels;
    let radii = logspace(k.r_min, k.r_max, k.points);
    let rows = kernel_table(k.lambda, &radii)?;
    let monotone = monotonicity_check(k.lambda, &radii)?;
    let bound = derivative_lower_bound_check(&radii)?;
    create_out(&ctx.out)?;
    if ctx.wants(Format::Csv) {
        let mut w = csv::Writer::from_path(ctx.out.join("kernels.csv"))?;
        for row in &rows {
            w.serialize(row)?;
        }
        w.flush()?;
    }
    if ctx.wants(Format::Json) {
        let json = serde_json::json!({
            "lambda": k.lambda,
            "monotone": monotone,
            "derivative_lower_bound": bound,
            "rows": rows,
        });
        fs::write(ctx.out.join("kernels.json"), serde_json::to_string_pretty(&json)?)?;
    }
    println!("{:>12} {:>12} {:>14} {:>14} {:>14}", "r", "rho", "K0", "K1", "combined");
    let stride = (rows.len() / 10).max(1);
    for row in rows.iter().step_by(stride) {
        println!(
            "{:>12.5e} {:>12.5e} {:>14.6e} {:>14.6e} {:>14.6e}",
            row.r, row.rho, row.k0, row.k1, row.combined
        );
    }
    println!("monotone: {monotone}");
    println!("derivative lower bound: {bound}");
    Ok(())
}
