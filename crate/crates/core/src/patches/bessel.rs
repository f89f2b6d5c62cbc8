//! Modified Bessel functions of the second kind, orders 0 and 1.
//!
//! Below [`SWITCHOVER`] the power series around the origin is summed
//! directly; above it Steed's continued fraction for `K_ν(x)·eˣ√x` (the
//! large-argument branch) is used. Both branches reach ~1e-15 relative
//! accuracy at the switchover.

use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Argument at which evaluation switches from the series to the continued fraction.
pub const SWITCHOVER: f64 = 2.0;

const EPS: f64 = 1e-17;
const MAX_TERMS: usize = 10_000;

fn check_argument(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::param("x", format!("{x} must be positive and finite")))
    }
}

/// `(K₀(x), K₁(x))`.
pub fn bessel_k01(x: f64) -> Result<(f64, f64)> {
    check_argument(x)?;
    Ok(if x < SWITCHOVER {
        series(x)
    } else {
        continued_fraction(x)
    })
}

pub fn bessel_k0(x: f64) -> Result<f64> {
    bessel_k01(x).map(|(k0, _)| k0)
}

pub fn bessel_k1(x: f64) -> Result<f64> {
    bessel_k01(x).map(|(_, k1)| k1)
}

/// Power series about the origin:
///
/// `K₀ = −(ln(x/2) + γ) I₀ + Σ H_k (x²/4)^k / (k!)²`,
/// `K₁ = 1/x + ln(x/2) I₁ − (x/4) Σ (ψ(k+1) + ψ(k+2)) (x²/4)^k / (k!(k+1)!)`.
pub(crate) fn series(x: f64) -> (f64, f64) {
    let y = 0.25 * x * x;
    let log_half = (0.5 * x).ln();

    // k = 0 terms
    let mut t0 = 1.0; // y^k / (k!)²
    let mut t1 = 1.0; // y^k / (k!(k+1)!)
    let mut harmonic = 0.0; // H_k
    let mut i0 = t0;
    let mut i1_sum = t1;
    let mut k0_sum = 0.0;
    let mut k1_sum = (-2.0 * EULER_GAMMA + 1.0) * t1;

    for k in 1..MAX_TERMS {
        let kf = k as f64;
        t0 *= y / (kf * kf);
        t1 *= y / (kf * (kf + 1.0));
        harmonic += 1.0 / kf;
        let psi_sum = -2.0 * EULER_GAMMA + 2.0 * harmonic + 1.0 / (kf + 1.0);
        i0 += t0;
        i1_sum += t1;
        k0_sum += harmonic * t0;
        k1_sum += psi_sum * t1;
        if t0 < EPS * i0 && t1 < EPS * i1_sum {
            break;
        }
    }
    let i1 = 0.5 * x * i1_sum;
    let k0 = -(log_half + EULER_GAMMA) * i0 + k0_sum;
    let k1 = 1.0 / x + log_half * i1 - 0.25 * x * k1_sum;
    (k0, k1)
}

/// Steed's continued fraction (Temme's CF2) for order 0, with `K₁` recovered from the
/// companion ratio.
pub(crate) fn continued_fraction(x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAX_TERMS {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    h *= a1;
    let k0 = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}
