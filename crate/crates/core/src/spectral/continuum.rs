//! Whole-plane norms of the velocity-defect kernel, evaluated by radial quadrature.

use crate::quadrature::integrate_radial;

const TOL: f64 = 1e-12;

/// `∫_{ℝ²} |S_λ(ξ)| dξ` with `S_λ(ξ) = λξ / (|ξ|²(λ + |ξ|²))`.
pub fn error_symbol_l1(lambda: f64) -> f64 {
    integrate_radial(|r| if r == 0.0 { 0.0 } else { lambda / (r * (lambda + r * r)) }, TOL)
}

/// `λ (∫_{ℝ²} (λ + |ξ|²)⁻² dξ)^{1/2}`, the `L²` bound on the gradient of the defect kernel.
pub fn gradient_kernel_l2(lambda: f64) -> f64 {
    let inner = integrate_radial(
        |r| {
            let d = lambda + r * r;
            1.0 / (d * d)
        },
        TOL,
    );
    lambda * inner.sqrt()
}
