//! K₀, K₁ and the combined kernel (log r + K₀(√λ r))/2π with its monotonicity checks.
//!
//! `cargo run --example bessel_kernels -- [lambda]`

use qgsw::patches::{derivative_lower_bound_check, kernel_table, logspace, monotonicity_check};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lambda: f64 = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(1.0);
    let r = logspace(1e-3, 20.0, 500);
    println!("{:>11} {:>11} {:>14} {:>14} {:>14} {:>14}", "r", "ρ", "K₀", "K₁", "G", "G'");
    for row in kernel_table(lambda, &r)?.iter().step_by(50) {
        println!(
            "{:>11.4e} {:>11.4e} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e}",
            row.r, row.rho, row.k0, row.k1, row.combined, row.derivative
        );
    }
    println!("G increasing on the grid: {}", monotonicity_check(lambda, &r)?);
    println!("K₀' ≥ −e^(−r)(1 + 1/r) on the grid: {}", derivative_lower_bound_check(&r)?);
    Ok(())
}
