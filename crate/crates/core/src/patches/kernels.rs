//! Radial kernels `(1/2π) log r`, `(1/2π) K₀(√λ r)` and their sum.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::bessel::bessel_k01;
use crate::error::{Error, Result};

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("{v} must be positive")))
    }
}

/// `(1/2π) log r + (1/2π) K₀(√λ r)`.
pub fn kernel_combined(r: f64, lambda: f64) -> Result<f64> {
    check_positive("r", r)?;
    check_positive("lambda", lambda)?;
    let (k0, _) = bessel_k01(lambda.sqrt() * r)?;
    Ok((r.ln() + k0) / (2.0 * PI))
}

/// Radial derivative `(1/2π)(1/r − √λ K₁(√λ r))` of [`kernel_combined`].
pub fn kernel_combined_derivative(r: f64, lambda: f64) -> Result<f64> {
    check_positive("r", r)?;
    check_positive("lambda", lambda)?;
    let sl = lambda.sqrt();
    let (_, k1) = bessel_k01(sl * r)?;
    Ok((1.0 / r - sl * k1) / (2.0 * PI))
}

/// One tabulated point of the kernel study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelRow {
    pub r: f64,
    /// `ρ = √λ r`
    pub rho: f64,
    pub k0: f64,
    pub k1: f64,
    pub combined: f64,
    pub derivative: f64,
    /// `1/ρ − K₁(ρ) > 0`
    pub increasing: bool,
    /// `−K₁(ρ) ≥ −e^{−ρ}(1 + 1/ρ)`
    pub lower_bound: bool,
}

pub fn kernel_row(r: f64, lambda: f64) -> Result<KernelRow> {
    check_positive("r", r)?;
    check_positive("lambda", lambda)?;
    let rho = lambda.sqrt() * r;
    let (k0, k1) = bessel_k01(rho)?;
    Ok(KernelRow {
        r,
        rho,
        k0,
        k1,
        combined: (r.ln() + k0) / (2.0 * PI),
        derivative: (1.0 / r - lambda.sqrt() * k1) / (2.0 * PI),
        increasing: 1.0 / rho - k1 > 0.0,
        lower_bound: -k1 >= -(-rho).exp() * (1.0 + 1.0 / rho),
    })
}

/// True iff the combined kernel is strictly increasing at every radius of `r_grid`.
///
/// The sign of the derivative depends only on `ρ = √λ r` through `1/ρ − K₁(ρ)`.
pub fn monotonicity_check(lambda: f64, r_grid: &[f64]) -> Result<bool> {
    check_positive("lambda", lambda)?;
    for &r in r_grid {
        if !kernel_row(r, lambda)?.increasing {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff `K₀'(r) = −K₁(r) ≥ −e^{−r}(1 + 1/r)` at every point of `r_grid`.
pub fn derivative_lower_bound_check(r_grid: &[f64]) -> Result<bool> {
    for &r in r_grid {
        if !kernel_row(r, 1.0)?.lower_bound {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `count` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..count)
                .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
                .collect()
        }
    }
}

/// Tabulates [`kernel_row`] over `r_grid`.
pub fn kernel_table(lambda: f64, r_grid: &[f64]) -> Result<Vec<KernelRow>> {
    r_grid.iter().map(|&r| kernel_row(r, lambda)).collect()
}
