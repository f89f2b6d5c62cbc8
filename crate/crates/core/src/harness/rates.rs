use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `(gap0² + CλT)^{½·exp(−CT)}`, the a-priori bound on the `X^{−1}_{2,∞}` error at time `T`.
pub fn predicted_bound(gap0: f64, lambda: f64, t: f64, c: f64) -> f64 {
    let base = gap0 * gap0 + c * lambda * t;
    if base == 0.0 {
        return 0.0;
    }
    base.powf(0.5 * (-c * t).exp())
}

/// Truncation frequency `Θ_λ = predicted_bound(0, λ, T, C)^{−α}`.
pub fn theta_rule(lambda: f64, t: f64, c: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param("alpha", format!("{alpha} is not in (0, 1)")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::param("c", format!("{c} must be positive")));
    }
    if !(lambda > 0.0 && t > 0.0) {
        return Err(Error::param("lambda", "lambda and T must be positive"));
    }
    Ok(predicted_bound(0.0, lambda, t, c).powf(-alpha))
}

/// Least-squares power law `err ≈ A λ^exponent`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub norm: String,
    pub exponent: f64,
    /// `log A`.
    pub intercept: f64,
    /// Root-mean-square residual of the log-log fit.
    pub residual: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// `½·exp(−C·T)` for the fitted rate constant, where one was found.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub envelope: Option<f64>,
}

/// Fits `log err = intercept + exponent · log λ` by least squares.
pub fn fit_rate(points: &[(f64, f64)]) -> Result<RateFit> {
    if points.len() < 3 {
        return Err(Error::param("points", format!("{} points given, at least 3 required", points.len())));
    }
    if let Some(&(l, e)) = points.iter().find(|(l, e)| !(*l > 0.0 && *e > 0.0) || !l.is_finite() || !e.is_finite()) {
        return Err(Error::param("points", format!("({l}, {e}) is not a pair of positive numbers")));
    }
    let m = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::param("points", "all lambda values coincide"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - exponent * x).powi(2))
        .sum::<f64>()
        / m)
        .sqrt();
    let (lambda_min, lambda_max) = points
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), p| (lo.min(p.0), hi.max(p.0)));
    Ok(RateFit {
        norm: String::new(),
        exponent,
        intercept,
        residual,
        lambda_min,
        lambda_max,
        envelope: None,
    })
}

/// Smallest `C` with `err ≤ predicted_bound(gap0, λ, T, C)`, by bisection.
///
/// On `C ∈ (0, (1 − gap0²)/(λT)]` the bound increases from `gap0^{…}` towards 1, so a
/// solution exists only when `err < 1`. Returns `None` otherwise.
pub fn fit_rate_constant(err: f64, gap0: f64, lambda: f64, t: f64) -> Option<f64> {
    if !(err.is_finite() && err >= 0.0 && lambda > 0.0 && t > 0.0 && gap0 < 1.0) {
        return None;
    }
    let hi_c = (1.0 - gap0 * gap0) / (lambda * t);
    if err >= predicted_bound(gap0, lambda, t, hi_c) {
        return None;
    }
    let (mut lo, mut hi) = (0.0f64, hi_c);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if predicted_bound(gap0, lambda, t, mid) >= err {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Some(hi)
}
