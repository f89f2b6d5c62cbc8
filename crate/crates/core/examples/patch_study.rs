//! Ellipse and disc patches under QGSW and Euler: sup difference and symmetric difference.
//!
//! `cargo run --release --example patch_study -- [n] [lambda]`

use qgsw::harness::{endpoint_patch_study, PatchStudyConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(256);
    let lambda: f64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(0.5);

    for (name, cfg) in [
        ("ellipse", PatchStudyConfig::endpoint_ellipse(n, lambda)),
        ("disc", PatchStudyConfig::endpoint_disc(n, lambda)),
    ] {
        let report = endpoint_patch_study(&cfg)?;
        println!(
            "{name}: max sup difference {:.4}, window {:?}, exceeds {}",
            report.max_sup_difference(),
            report.window,
            report.exceeds
        );
        for i in (0..report.times.len()).step_by(5) {
            println!(
                "  t {:.2}  sup {:.4}  symdiff {:.4}  overlap {:.4}",
                report.times[i],
                report.sup_difference[i],
                report.symmetric_difference_area[i],
                report.intersection_area[i]
            );
        }
    }
    Ok(())
}
