//! Mean, L² and energy drift of the solver on smooth two-blob data.
//!
//! `cargo run --release --example conservation -- [n] [lambda]`

use qgsw::harness::InitialData;
use qgsw::spectral::Grid;
use qgsw::transport::{simulate, uniform_times, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(128);
    let lambda: f64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(0.0);

    let grid = Grid::periodic(n)?;
    let (omega0, removed) = InitialData::two_blob(grid.length()).sample(&grid)?;
    let traj = simulate(&omega0, lambda, 1.0, &SolverConfig::smooth(), &uniform_times(1.0, 10))?;
    let d0 = traj.diagnostics[0];
    println!("removed mean {removed:.6}; {} steps", traj.diagnostics.len() - 1);
    println!("{:>6} {:>12} {:>12} {:>12} {:>10}", "t", "mean", "ΔL²/L²", "ΔH/H", "max |u|");
    let last = traj.diagnostics.len() - 1;
    let stride = (last / 10).max(1);
    for d in (0..=last).filter(|i| i % stride == 0 || *i == last).map(|i| traj.diagnostics[i]) {
        println!(
            "{:>6.3} {:>12.3e} {:>12.3e} {:>12.3e} {:>10.4}",
            d.t,
            d.mean,
            (d.l2 - d0.l2) / d0.l2,
            (d.hamiltonian - d0.hamiltonian) / d0.hamiltonian,
            d.max_velocity
        );
    }
    Ok(())
}
