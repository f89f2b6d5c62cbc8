//! Fourier-symbol operators behind both velocity laws.
//!
//! The QGSW law is `u = ∇^⊥(λ − Δ)⁻¹ω` and the Euler law is its `λ = 0`
//! member, `v = ∇^⊥(−Δ)⁻¹Ω`, with `∇^⊥ = (−∂₂, ∂₁)`.

use rustfft::num_complex::Complex64;

use super::{Grid, ScalarField, VectorField};
use crate::error::{Error, Result};

const MEAN_TOLERANCE: f64 = 1e-10;

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda >= 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::param("lambda", format!("{lambda} must be a nonnegative real")))
    }
}

/// Rejects fields whose mean is not negligible against their `L²` norm.
pub fn check_mean_zero(f: &ScalarField) -> Result<()> {
    let mean = f.mean();
    let norm = f.l2_norm();
    if mean.abs() * f.grid().length() > MEAN_TOLERANCE * norm || (norm == 0.0 && mean != 0.0) {
        return Err(Error::NonZeroMean { mean, norm });
    }
    Ok(())
}

/// Subtracts the mean; returns the projected field and the removed mean.
pub fn project_mean_zero(f: &ScalarField) -> (ScalarField, f64) {
    let mean = f.mean();
    let mut coeffs = f.spectral().to_vec();
    coeffs[0] = Complex64::default();
    (ScalarField::from_spectral(f.grid(), coeffs), mean)
}

/// Symbol of `(λ − Δ)⁻¹` at `|k|²`, with the zero mode mapped to `1/λ` (or 0 when `λ = 0`).
#[inline]
pub(crate) fn helmholtz_symbol(k2: f64, lambda: f64) -> f64 {
    if k2 == 0.0 {
        if lambda > 0.0 {
            1.0 / lambda
        } else {
            0.0
        }
    } else {
        1.0 / (lambda + k2)
    }
}

/// Stream-function coefficients `ψ̂ = ω̂ / (λ + |k|²)` without any precondition check.
pub(crate) fn stream_spectrum(grid: &Grid, omega_hat: &[Complex64], lambda: f64) -> Vec<Complex64> {
    omega_hat
        .iter()
        .enumerate()
        .map(|(idx, w)| w * helmholtz_symbol(grid.k_squared(idx), lambda))
        .collect()
}

/// Perpendicular gradient `(−ik₂ψ̂, ik₁ψ̂)` in coefficient space.
pub(crate) fn perp_gradient_spectrum(
    grid: &Grid,
    psi_hat: &[Complex64],
) -> (Vec<Complex64>, Vec<Complex64>) {
    let kd = grid.derivative_wavenumbers();
    let n = grid.n();
    let i = Complex64::new(0.0, 1.0);
    psi_hat
        .iter()
        .enumerate()
        .map(|(idx, p)| {
            let ip = i * p;
            (-kd[idx / n] * ip, kd[idx % n] * ip)
        })
        .unzip()
}

/// Gradient `(ik₁f̂, ik₂f̂)` in coefficient space.
pub(crate) fn gradient_spectrum(grid: &Grid, f_hat: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let kd = grid.derivative_wavenumbers();
    let n = grid.n();
    let i = Complex64::new(0.0, 1.0);
    f_hat
        .iter()
        .enumerate()
        .map(|(idx, f)| {
            let ifv = i * f;
            (kd[idx % n] * ifv, kd[idx / n] * ifv)
        })
        .unzip()
}

fn vector_from_spectra(grid: &Grid, a: Vec<Complex64>, b: Vec<Complex64>) -> VectorField {
    let (va, vb) = grid.inverse_pair(&a, &b);
    VectorField {
        u1: ScalarField::from_parts(grid, va, a),
        u2: ScalarField::from_parts(grid, vb, b),
    }
}

/// Stream function `ψ = (λ − Δ)⁻¹ω`.
///
/// For `λ = 0` the input must be mean-free and the zero mode of `ψ` is set to 0.
pub fn invert_helmholtz(omega: &ScalarField, lambda: f64) -> Result<ScalarField> {
    check_lambda(lambda)?;
    if lambda == 0.0 {
        check_mean_zero(omega)?;
    }
    let grid = omega.grid();
    Ok(ScalarField::from_spectral(
        grid,
        stream_spectrum(grid, omega.spectral(), lambda),
    ))
}

/// Velocity `u = ∇^⊥(λ − Δ)⁻¹ω`; `λ = 0` gives the Euler velocity.
pub fn velocity_from_vorticity(omega: &ScalarField, lambda: f64) -> Result<VectorField> {
    check_lambda(lambda)?;
    if lambda == 0.0 {
        check_mean_zero(omega)?;
    }
    let grid = omega.grid();
    let psi_hat = stream_spectrum(grid, omega.spectral(), lambda);
    let (a, b) = perp_gradient_spectrum(grid, &psi_hat);
    Ok(vector_from_spectra(grid, a, b))
}

/// `|S_λ(k)| = λ / (|k| (λ + |k|²))`, the magnitude of the error symbol.
pub fn error_symbol_magnitude(k: f64, lambda: f64) -> f64 {
    lambda / (k * (lambda + k * k))
}

/// Velocity defect `λ∇^⊥(−Δ)⁻¹(λ − Δ)⁻¹ω`, equal to the Euler velocity minus the QGSW velocity.
pub fn error_velocity(omega: &ScalarField, lambda: f64) -> Result<VectorField> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::param("lambda", format!("{lambda} must be positive")));
    }
    check_mean_zero(omega)?;
    let grid = omega.grid();
    let coeffs: Vec<Complex64> = omega
        .spectral()
        .iter()
        .enumerate()
        .map(|(idx, w)| {
            let k2 = grid.k_squared(idx);
            if k2 == 0.0 {
                Complex64::default()
            } else {
                w * (lambda / (k2 * (lambda + k2)))
            }
        })
        .collect();
    let (a, b) = perp_gradient_spectrum(grid, &coeffs);
    Ok(vector_from_spectra(grid, a, b))
}

/// Whether the two-thirds rule keeps spectral index `idx`.
#[inline]
pub fn dealias_keeps(grid: &Grid, idx: usize) -> bool {
    let (k1, k2) = grid.integer_wavevector(idx);
    let cutoff = grid.n() as f64 / 3.0;
    (k1.unsigned_abs().max(k2.unsigned_abs()) as f64) <= cutoff
}

pub(crate) fn dealias_in_place(grid: &Grid, coeffs: &mut [Complex64]) {
    for (idx, c) in coeffs.iter_mut().enumerate() {
        if !dealias_keeps(grid, idx) {
            *c = Complex64::default();
        }
    }
}

/// Two-thirds rule: zeroes modes with `max(|k₁|, |k₂|) > n/3`.
pub fn dealias(f: &ScalarField) -> ScalarField {
    let grid = f.grid();
    let mut coeffs = f.spectral().to_vec();
    dealias_in_place(grid, &mut coeffs);
    ScalarField::from_spectral(grid, coeffs)
}

/// `H_λ = ½ ∫ ω (λ − Δ)⁻¹ ω`, evaluated by Parseval.
pub fn hamiltonian(omega: &ScalarField, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let grid = omega.grid();
    let n2 = grid.len() as f64;
    let sum: f64 = omega
        .spectral()
        .iter()
        .enumerate()
        .map(|(idx, w)| w.norm_sqr() * helmholtz_symbol(grid.k_squared(idx), lambda))
        .sum();
    Ok(0.5 * sum * grid.area() / (n2 * n2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_diff(a: &ScalarField, b: impl Fn(f64, f64) -> f64) -> f64 {
        let g = a.grid();
        (0..g.len())
            .map(|idx| {
                let (x, y) = g.point(idx);
                (a.values()[idx] - b(x, y)).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn helmholtz_single_modes() {
        let g = Grid::periodic(16).unwrap();
        let s = ScalarField::from_fn(&g, |x, _| x.sin());
        assert!(max_diff(&invert_helmholtz(&s, 0.0).unwrap(), |x, _| x.sin()) < 1e-14);
        assert!(max_diff(&invert_helmholtz(&s, 1.0).unwrap(), |x, _| 0.5 * x.sin()) < 1e-14);
        let c = ScalarField::from_fn(&g, |_, y| y.cos());
        assert!(max_diff(&invert_helmholtz(&c, 3.0).unwrap(), |_, y| 0.25 * y.cos()) < 1e-14);
    }

    #[test]
    fn helmholtz_zero_mode() {
        let g = Grid::periodic(8).unwrap();
        let f = ScalarField::from_fn(&g, |_, _| 2.0);
        let psi = invert_helmholtz(&f, 4.0).unwrap();
        assert!(max_diff(&psi, |_, _| 0.5) < 1e-14);
        assert!(matches!(invert_helmholtz(&f, 0.0), Err(Error::NonZeroMean { .. })));
    }

    #[test]
    fn negative_lambda_rejected() {
        let g = Grid::periodic(8).unwrap();
        let f = ScalarField::zeros(&g);
        assert!(invert_helmholtz(&f, -1.0).is_err());
        assert!(error_velocity(&f, 0.0).is_err());
    }

    #[test]
    fn dealias_drops_high_mode() {
        let g = Grid::periodic(64).unwrap();
        let low = ScalarField::from_fn(&g, |x, _| x.cos());
        let high = ScalarField::from_fn(&g, |x, _| (30.0 * x).cos());
        assert!(max_diff(&dealias(&low), |x, _| x.cos()) < 1e-14);
        assert!(dealias(&high).max_abs() < 1e-12);
    }

    #[test]
    fn projection_removes_mean() {
        let g = Grid::periodic(16).unwrap();
        let f = ScalarField::from_fn(&g, |x, y| 1.5 + x.sin() * y.cos());
        let (p, mean) = project_mean_zero(&f);
        assert!((mean - 1.5).abs() < 1e-14);
        assert!(check_mean_zero(&p).is_ok());
    }
}
