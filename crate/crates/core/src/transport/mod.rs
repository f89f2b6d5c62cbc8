//! Pseudo-spectral transport solver, flow maps and snapshot files.

mod flow_map;
mod snapshot;
mod solver;

pub use flow_map::{
    advect_points, max_displacement, AnalyticVelocity, Direction, SnapshotVelocity,
    VelocityProvider,
};
pub use snapshot::{read_snapshot, read_snapshot_from, write_snapshot, write_snapshot_to};
pub use solver::{
    rhs, simulate, step, uniform_times, SolverConfig, SpectralFilter, StepDiagnostics, Trajectory,
};
