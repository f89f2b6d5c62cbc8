//! QGSW and Euler velocities of single Fourier modes, the velocity defect, and the
//! whole-plane norms of the defect kernel.
//!
//! `cargo run --example velocity_laws`

use std::f64::consts::PI;

use qgsw::spectral::continuum::{error_symbol_l1, gradient_kernel_l2};
use qgsw::spectral::{error_velocity, velocity_from_vorticity, Grid, ScalarField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::new(32, 2.0 * PI)?;
    let omega = ScalarField::from_fn(&grid, |x, _| x.sin());
    for lambda in [0.0, 0.5, 1.0, 4.0] {
        let u = velocity_from_vorticity(&omega, lambda)?;
        println!(
            "λ = {lambda:>3}: max |u₂| = {:.6} (expected {:.6})",
            u.u2.max_abs(),
            1.0 / (1.0 + lambda)
        );
    }
    let defect = error_velocity(&omega, 1.0)?;
    println!("defect at λ = 1: max |e₂| = {:.6}", defect.u2.max_abs());

    println!("\n{:>6} {:>14} {:>14} {:>14} {:>14}", "λ", "‖S_λ‖₁", "π²√λ", "grad L²", "√(πλ)");
    for lambda in [0.25, 1.0, 4.0] {
        println!(
            "{lambda:>6} {:>14.10} {:>14.10} {:>14.10} {:>14.10}",
            error_symbol_l1(lambda),
            PI * PI * f64::sqrt(lambda),
            gradient_kernel_l2(lambda),
            f64::sqrt(PI * lambda)
        );
    }
    Ok(())
}
