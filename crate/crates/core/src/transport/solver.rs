use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{
    check_mean_zero, dealias_keeps, hamiltonian, helmholtz_symbol, Exponent, Grid, ScalarField,
};

/// High-order exponential filter `exp(−α (|k|/k_max)^m)`, `k_max` the two-thirds cutoff radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralFilter {
    pub alpha: f64,
    pub order: f64,
}

impl Default for SpectralFilter {
    fn default() -> Self {
        SpectralFilter {
            alpha: 36.0,
            order: 36.0,
        }
    }
}

/// Time-integration settings. The scheme is always classical RK4 with two-thirds dealiasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    /// Courant number in `(0, 1]`.
    pub cfl: f64,
    /// Fixed step; `None` selects an adaptive CFL step.
    pub dt: Option<f64>,
    /// Upper bound on adaptive steps.
    pub max_dt: Option<f64>,
    pub filter: Option<SpectralFilter>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            cfl: 0.5,
            dt: None,
            max_dt: None,
            filter: None,
        }
    }
}

impl SolverConfig {
    /// Defaults for smooth data: filter off.
    pub fn smooth() -> Self {
        Self::default()
    }

    /// Defaults for patch data: filter on.
    pub fn patch() -> Self {
        SolverConfig {
            filter: Some(SpectralFilter::default()),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::param("cfl", format!("{} is not in (0, 1]", self.cfl)));
        }
        for (name, v) in [("dt", self.dt), ("max_dt", self.max_dt)] {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::param(name, format!("{v} must be positive")));
                }
            }
        }
        if let Some(f) = self.filter {
            if !(f.alpha > 0.0 && f.order > 0.0) {
                return Err(Error::param("filter", "alpha and order must be positive"));
            }
        }
        Ok(())
    }
}

/// Diagnostics recorded after every step (and at `t = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepDiagnostics {
    pub t: f64,
    pub dt: f64,
    pub mean: f64,
    pub l1: f64,
    pub l2: f64,
    pub l4: f64,
    pub max_abs: f64,
    pub hamiltonian: f64,
    pub max_velocity: f64,
}

/// Output of [`simulate`]: vorticity snapshots at the requested times plus per-step diagnostics.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub lambda: f64,
    pub times: Vec<f64>,
    pub snapshots: Vec<ScalarField>,
    pub diagnostics: Vec<StepDiagnostics>,
}

impl Trajectory {
    pub fn grid(&self) -> &Grid {
        self.snapshots[0].grid()
    }

    pub fn final_snapshot(&self) -> &ScalarField {
        self.snapshots.last().expect("trajectory has at least one snapshot")
    }
}

/// Precomputed symbols for one `(grid, λ, config)` combination.
pub(crate) struct Integrator {
    grid: Grid,
    lambda: f64,
    helmholtz: Vec<f64>,
    keep: Vec<bool>,
    filter: Option<Vec<f64>>,
}

impl Integrator {
    pub(crate) fn new(grid: &Grid, lambda: f64, filter: Option<SpectralFilter>) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::param("lambda", format!("{lambda} must be nonnegative")));
        }
        let helmholtz = (0..grid.len())
            .map(|idx| helmholtz_symbol(grid.k_squared(idx), lambda))
            .collect();
        let keep: Vec<bool> = (0..grid.len()).map(|idx| dealias_keeps(grid, idx)).collect();
        let filter = filter.map(|f| {
            let kmax = grid.n() as f64 / 3.0 * grid.wavenumbers()[1];
            (0..grid.len())
                .map(|idx| (-f.alpha * (grid.k_squared(idx).sqrt() / kmax).powf(f.order)).exp())
                .collect()
        });
        Ok(Integrator {
            grid: grid.clone(),
            lambda,
            helmholtz,
            keep,
            filter,
        })
    }

    pub(crate) fn project(&self, coeffs: &mut [Complex64]) {
        for (c, &k) in coeffs.iter_mut().zip(&self.keep) {
            if !k {
                *c = Complex64::default();
            }
        }
    }

    /// `−P(u·∇ω)` in coefficient space; returns the max velocity magnitude too.
    pub(crate) fn rhs(&self, w_hat: &[Complex64], out: &mut Vec<Complex64>) -> f64 {
        let grid = &self.grid;
        let n = grid.n();
        let kd = grid.derivative_wavenumbers();
        let len = grid.len();
        let mut ua = Vec::with_capacity(len);
        let mut ub = Vec::with_capacity(len);
        let mut ga = Vec::with_capacity(len);
        let mut gb = Vec::with_capacity(len);
        for (idx, w) in w_hat.iter().enumerate() {
            let (k1, k2) = (kd[idx % n], kd[idx / n]);
            let iw = Complex64::new(-w.im, w.re);
            let ipsi = iw * self.helmholtz[idx];
            ua.push(-k2 * ipsi);
            ub.push(k1 * ipsi);
            ga.push(k1 * iw);
            gb.push(k2 * iw);
        }
        let (u1, u2) = grid.inverse_pair(&ua, &ub);
        let (g1, g2) = grid.inverse_pair(&ga, &gb);
        let mut umax: f64 = 0.0;
        let product: Vec<f64> = (0..len)
            .map(|i| {
                umax = umax.max(u1[i].hypot(u2[i]));
                u1[i] * g1[i] + u2[i] * g2[i]
            })
            .collect();
        *out = grid.forward(&product);
        for (c, &k) in out.iter_mut().zip(&self.keep) {
            *c = if k { -*c } else { Complex64::default() };
        }
        // the advection term is mean-free
        out[0] = Complex64::default();
        umax
    }

    /// One classical RK4 step followed by the optional filter.
    pub(crate) fn step(&self, w_hat: &[Complex64], dt: f64) -> Vec<Complex64> {
        let mut k1 = Vec::new();
        self.rhs(w_hat, &mut k1);
        self.step_with_first_stage(w_hat, &k1, dt)
    }

    pub(crate) fn step_with_first_stage(
        &self,
        w_hat: &[Complex64],
        k1: &[Complex64],
        dt: f64,
    ) -> Vec<Complex64> {
        let axpy = |a: f64, k: &[Complex64]| -> Vec<Complex64> {
            w_hat.iter().zip(k).map(|(w, k)| w + k * a).collect()
        };
        let mut k2 = Vec::new();
        let mut k3 = Vec::new();
        let mut k4 = Vec::new();
        self.rhs(&axpy(0.5 * dt, k1), &mut k2);
        self.rhs(&axpy(0.5 * dt, &k2), &mut k3);
        self.rhs(&axpy(dt, &k3), &mut k4);
        let sixth = dt / 6.0;
        let mut next: Vec<Complex64> = (0..w_hat.len())
            .map(|i| w_hat[i] + (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * sixth)
            .collect();
        if let Some(filter) = &self.filter {
            for (c, f) in next.iter_mut().zip(filter) {
                *c *= f;
            }
        }
        next
    }

    fn diagnostics(&self, w_hat: &[Complex64], t: f64, dt: f64, umax: f64) -> Result<(ScalarField, StepDiagnostics)> {
        let values = self.grid.inverse_real(w_hat);
        let field = ScalarField::from_parts(&self.grid, values, w_hat.to_vec());
        let diag = StepDiagnostics {
            t,
            dt,
            mean: field.mean(),
            l1: field.lp_norm(Exponent::Finite(1.0)),
            l2: field.l2_norm(),
            l4: field.lp_norm(Exponent::Finite(4.0)),
            max_abs: field.max_abs(),
            hamiltonian: hamiltonian(&field, self.lambda)?,
            max_velocity: umax,
        };
        Ok((field, diag))
    }
}

fn check_initial(omega: &ScalarField, lambda: f64) -> Result<()> {
    if lambda == 0.0 {
        check_mean_zero(omega)?;
    }
    if !omega.is_finite() {
        return Err(Error::NonFinite { time: 0.0, steps: 0 });
    }
    Ok(())
}

/// `−dealias(u·∇ω)` with `u` the velocity of `ω` for parameter `λ`.
pub fn rhs(omega: &ScalarField, lambda: f64) -> Result<ScalarField> {
    check_initial(omega, lambda)?;
    let integrator = Integrator::new(omega.grid(), lambda, None)?;
    let mut w = omega.spectral().to_vec();
    integrator.project(&mut w);
    let mut out = Vec::new();
    integrator.rhs(&w, &mut out);
    Ok(ScalarField::from_spectral(omega.grid(), out))
}

/// Advances `ω` by one RK4 step of size `dt` (dealiased, optionally filtered).
pub fn step(omega: &ScalarField, lambda: f64, dt: f64, cfg: &SolverConfig) -> Result<ScalarField> {
    cfg.validate()?;
    check_initial(omega, lambda)?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param("dt", format!("{dt} must be positive")));
    }
    let integrator = Integrator::new(omega.grid(), lambda, cfg.filter)?;
    let mut w = omega.spectral().to_vec();
    integrator.project(&mut w);
    let next = integrator.step(&w, dt);
    let field = ScalarField::from_spectral(omega.grid(), next);
    if !field.is_finite() {
        return Err(Error::NonFinite { time: dt, steps: 1 });
    }
    Ok(field)
}

/// Integrates `∂ₜω + u·∇ω = 0` from `t = 0` to `t_final`, storing snapshots at `sample_times`.
///
/// Steps are shortened so that every sample time is hit exactly; the initial
/// field is projected onto the dealiased modes before the first step.
pub fn simulate(
    omega0: &ScalarField,
    lambda: f64,
    t_final: f64,
    cfg: &SolverConfig,
    sample_times: &[f64],
) -> Result<Trajectory> {
    cfg.validate()?;
    check_initial(omega0, lambda)?;
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::param("t_final", format!("{t_final} must be positive")));
    }
    if sample_times.is_empty() {
        return Err(Error::param("sample_times", "at least one sample time is required"));
    }
    if sample_times.windows(2).any(|w| w[1] <= w[0])
        || sample_times[0] < 0.0
        || *sample_times.last().unwrap() > t_final
    {
        return Err(Error::param(
            "sample_times",
            "must be strictly increasing and inside [0, t_final]",
        ));
    }

    let grid = omega0.grid();
    let integrator = Integrator::new(grid, lambda, cfg.filter)?;
    let dx = grid.dx();
    let mut w = omega0.spectral().to_vec();
    integrator.project(&mut w);

    let mut times = Vec::with_capacity(sample_times.len());
    let mut snapshots = Vec::with_capacity(sample_times.len());
    let mut diagnostics = Vec::new();
    let mut next_sample = 0;

    let mut k1 = Vec::new();
    let mut umax = integrator.rhs(&w, &mut k1);
    let (field, diag) = integrator.diagnostics(&w, 0.0, 0.0, umax)?;
    diagnostics.push(diag);
    if sample_times[0] == 0.0 {
        times.push(0.0);
        snapshots.push(field);
        next_sample = 1;
    }

    let mut t = 0.0;
    let mut steps = 0usize;
    while t < t_final {
        let limit = if umax > 0.0 { cfg.cfl * dx / umax } else { f64::INFINITY };
        let mut dt = match cfg.dt {
            Some(dt) => {
                if dt > limit * (1.0 + 1e-12) {
                    return Err(Error::CflViolation { dt, limit, time: t });
                }
                dt
            }
            None => limit.min(cfg.max_dt.unwrap_or(f64::INFINITY)),
        };
        let target = sample_times
            .get(next_sample)
            .copied()
            .unwrap_or(t_final)
            .min(t_final);
        let remaining = target - t;
        let mut landed = false;
        if dt >= remaining * (1.0 - 1e-9) {
            dt = remaining;
            landed = true;
        } else if dt > 0.5 * remaining {
            dt = 0.5 * remaining;
        }

        w = integrator.step_with_first_stage(&w, &k1, dt);
        steps += 1;
        t = if landed { target } else { t + dt };

        umax = integrator.rhs(&w, &mut k1);
        let (field, diag) = integrator.diagnostics(&w, t, dt, umax)?;
        if !diag.l2.is_finite() || !umax.is_finite() {
            return Err(Error::NonFinite { time: t, steps });
        }
        diagnostics.push(diag);
        if landed && next_sample < sample_times.len() && target == sample_times[next_sample] {
            times.push(t);
            snapshots.push(field);
            next_sample += 1;
        }
    }

    Ok(Trajectory {
        lambda,
        times,
        snapshots,
        diagnostics,
    })
}

/// `count + 1` equispaced times from 0 to `t_final`.
pub fn uniform_times(t_final: f64, count: usize) -> Vec<f64> {
    let count = count.max(1);
    (0..=count)
        .map(|i| t_final * i as f64 / count as f64)
        .collect()
}
