//! λ-sweep of QGSW against Euler from two-blob data, with rate fits.
//!
//! `cargo run --release --example convergence_sweep -- [n] [out_dir]`

use std::path::PathBuf;

use qgsw::harness::{emit_report, run_sweep, Format, NormKind, SweepConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(128);
    let out = args.next().map(PathBuf::from);

    let cfg = SweepConfig::smooth_default(n);
    let threads = std::thread::available_parallelism().map_or(1, |p| p.get());
    let report = run_sweep(&cfg, threads)?;

    println!("rate constant C = {:?}", report.rate_constant);
    println!(
        "{:>9} {:>6} {:>8} {:>11} {:>11} {:>11} {:>11} {:>11}",
        "lambda", "steps", "theta", "l2", "u_l2", "xnorm", "bound", "hipass"
    );
    for c in &report.cases {
        let sup = |k| c.sup(k).unwrap_or(f64::NAN);
        println!(
            "{:>9.5} {:>6} {:>8.3} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e} {:>11.4e}",
            c.lambda,
            c.steps,
            c.theta.unwrap_or(f64::NAN),
            sup(NormKind::L2),
            sup(NormKind::UL2),
            sup(NormKind::Xnorm),
            c.predicted_bound.unwrap_or(f64::NAN),
            sup(NormKind::Hipass),
        );
    }
    for fit in &report.fits {
        println!(
            "fit {:>8}: slope {:.4} residual {:.2e}{}",
            fit.norm,
            fit.exponent,
            fit.residual,
            fit.envelope
                .map(|e| format!(" envelope {e:.4}"))
                .unwrap_or_default()
        );
    }
    println!("scaling consistent: {:?}", report.scaling_consistent());

    if let Some(dir) = out {
        for path in emit_report(&report, &dir, &[Format::Csv, Format::Json, Format::Svg])? {
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
