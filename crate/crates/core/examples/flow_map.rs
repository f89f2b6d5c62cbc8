//! Particle flow maps of QGSW and Euler from the same vorticity, and their sup distance.
//!
//! `cargo run --release --example flow_map`

use qgsw::harness::InitialData;
use qgsw::spectral::Grid;
use qgsw::transport::{
    advect_points, max_displacement, simulate, uniform_times, Direction, SnapshotVelocity,
    SolverConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid::periodic(128)?;
    let (omega0, _) = InitialData::two_blob(grid.length()).sample(&grid)?;
    let t = 1.0;
    let times = uniform_times(t, 100);
    let side = 32;
    let h = grid.length() / side as f64;
    let lattice: Vec<[f64; 2]> = (0..side * side)
        .map(|i| [(i % side) as f64 * h, (i / side) as f64 * h])
        .collect();
    let flow = |lambda: f64| -> qgsw::Result<Vec<[f64; 2]>> {
        let traj = simulate(&omega0, lambda, t, &SolverConfig::smooth(), &times)?;
        let velocity = SnapshotVelocity::from_trajectory(&traj)?;
        advect_points(&velocity, &lattice, 0.0, t, 0.01, Direction::Forward)
    };
    let euler = flow(0.0)?;
    println!("Euler max particle displacement {:.4}", max_displacement(&euler, &lattice));
    for lambda in [0.2, 0.1, 0.05, 0.025] {
        println!("λ = {lambda:<6} sup |Φ_λ − Φ| = {:.5}", max_displacement(&flow(lambda)?, &euler));
    }
    Ok(())
}
