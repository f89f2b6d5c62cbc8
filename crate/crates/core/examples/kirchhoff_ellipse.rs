//! Euler evolution of an elliptical patch: orientation and aspect ratio from second moments.
//!
//! `cargo run --release --example kirchhoff_ellipse -- [n]`

use std::f64::consts::PI;

use qgsw::patches::{second_moments, PatchSpec};
use qgsw::spectral::{project_mean_zero, Grid};
use qgsw::transport::{simulate, uniform_times, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(128);
    let grid = Grid::periodic(n)?;
    let (a, b) = (1.0, 0.5);
    let patch = PatchSpec::ellipse([PI, PI], a, b, 0.0).with_mollify_width(4.0 * 2.0 * PI / 128.0);
    let (omega0, mean) = project_mean_zero(&patch.rasterize(&grid)?);
    let times = uniform_times(2.0, 8);
    let traj = simulate(&omega0, 0.0, 2.0, &SolverConfig::patch(), &times)?;
    println!("free-space Kirchhoff rate ab/(a+b)² = {:.4} (rotation sense follows ∇^⊥ = (−∂₂, ∂₁))", a * b / (a + b).powi(2));
    let mut prev = 0.0;
    let mut unwrapped = 0.0;
    for (t, w) in traj.times.iter().zip(&traj.snapshots) {
        let m = second_moments(&w.offset(mean));
        let mut d = m.orientation() - prev;
        while d > PI / 2.0 {
            d -= PI;
        }
        while d < -PI / 2.0 {
            d += PI;
        }
        unwrapped += d;
        prev = m.orientation();
        let (major, minor) = m.principal();
        println!("t = {t:.2}: angle {unwrapped:+.4}, axis ratio {:.4}", (major / minor).sqrt());
    }
    Ok(())
}
