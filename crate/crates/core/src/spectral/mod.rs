//! Periodic grid, scalar/vector fields and the exact Fourier-symbol operators.

pub mod continuum;
mod field;
mod grid;
mod operators;

pub use field::{Exponent, ScalarField, VectorField};
pub use grid::Grid;
pub use operators::{
    check_mean_zero, dealias, dealias_keeps, error_symbol_magnitude, error_velocity, hamiltonian,
    invert_helmholtz, project_mean_zero, velocity_from_vorticity,
};

pub(crate) use operators::{dealias_in_place, gradient_spectrum, helmholtz_symbol};
