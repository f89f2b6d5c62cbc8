//! Vortex-patch data, overlap geometry and the log / Bessel-`K₀` kernels.

pub mod bessel;
pub mod kernels;
mod overlap;
mod shape;

pub use bessel::{bessel_k0, bessel_k01, bessel_k1};
pub use kernels::{
    derivative_lower_bound_check, kernel_combined, kernel_combined_derivative, kernel_row,
    kernel_table, logspace, monotonicity_check, KernelRow,
};
pub use overlap::{overlap_measures, second_moments, Moments, OverlapMeasures};
pub use shape::{PatchShape, PatchSpec};

pub(crate) use shape::PATCH_KEYS;
