use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::initial::InitialData;
use super::rates::{fit_rate, fit_rate_constant, predicted_bound, theta_rule, RateFit};
use crate::error::{Error, Result};
use crate::littlewood_paley::{annulus_project, sharp_highpass, DyadicFamily};
use crate::spectral::{project_mean_zero, velocity_from_vorticity, Exponent, Grid, ScalarField, VectorField};
use crate::transport::{simulate, uniform_times, SolverConfig, Trajectory};

/// Diagnostic norms recorded per case and sample time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NormKind {
    #[serde(rename = "l1")]
    L1,
    #[serde(rename = "l2")]
    L2,
    #[serde(rename = "l4")]
    L4,
    #[serde(rename = "linf")]
    Linf,
    #[serde(rename = "u_l2")]
    UL2,
    #[serde(rename = "u_linf")]
    ULinf,
    #[serde(rename = "xnorm")]
    Xnorm,
    #[serde(rename = "hipass")]
    Hipass,
    #[serde(rename = "annulus")]
    Annulus,
}

impl NormKind {
    pub const ALL: [NormKind; 9] = [
        NormKind::L1,
        NormKind::L2,
        NormKind::L4,
        NormKind::Linf,
        NormKind::UL2,
        NormKind::ULinf,
        NormKind::Xnorm,
        NormKind::Hipass,
        NormKind::Annulus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NormKind::L1 => "l1",
            NormKind::L2 => "l2",
            NormKind::L4 => "l4",
            NormKind::Linf => "linf",
            NormKind::UL2 => "u_l2",
            NormKind::ULinf => "u_linf",
            NormKind::Xnorm => "xnorm",
            NormKind::Hipass => "hipass",
            NormKind::Annulus => "annulus",
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NormKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::param("norms", format!("unknown norm `{s}`")))
    }
}

/// Rate constant of the a-priori bound: fixed, or the smallest value covering the largest `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateConstant {
    Fit,
    Fixed(f64),
}

impl Serialize for RateConstant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RateConstant::Fit => s.serialize_str("fit"),
            RateConstant::Fixed(c) => s.serialize_f64(*c),
        }
    }
}

impl<'de> Deserialize<'de> for RateConstant {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Number(c) => Ok(RateConstant::Fixed(c)),
            Repr::Text(t) if t == "fit" => Ok(RateConstant::Fit),
            Repr::Text(t) => Err(serde::de::Error::custom(format!(
                "expected a positive number or \"fit\", found \"{t}\""
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThetaRule {
    pub c: RateConstant,
    pub alpha: f64,
}

impl Default for ThetaRule {
    fn default() -> Self {
        ThetaRule {
            c: RateConstant::Fit,
            alpha: 0.5,
        }
    }
}

/// Everything needed to reproduce a λ-sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub initial: InitialData,
    pub n: usize,
    pub length: f64,
    /// Strictly decreasing positive values.
    pub lambdas: Vec<f64>,
    pub t_final: f64,
    /// Number of sample intervals on `[0, t_final]`.
    pub samples: usize,
    pub solver: SolverConfig,
    pub theta_rule: ThetaRule,
    /// Norms that receive rate fits and plots; every CSV column is always filled.
    pub norms: Vec<NormKind>,
}

impl SweepConfig {
    /// Two-blob data on the `2π` box with the default λ list.
    pub fn smooth_default(n: usize) -> Self {
        let length = 2.0 * std::f64::consts::PI;
        SweepConfig {
            initial: InitialData::two_blob(length),
            n,
            length,
            lambdas: vec![0.1, 0.05, 0.025, 0.0125, 0.00625],
            t_final: 1.0,
            samples: 10,
            solver: SolverConfig::smooth(),
            theta_rule: ThetaRule::default(),
            norms: NormKind::ALL.to_vec(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        Grid::new(self.n, self.length)?;
        if let Some(bad) = self.lambdas.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
            return Err(Error::param("lambdas", format!("{bad} is not positive")));
        }
        if self.lambdas.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::param("lambdas", "values must be strictly decreasing"));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::param("t_final", format!("{} must be positive", self.t_final)));
        }
        if self.samples == 0 {
            return Err(Error::param("samples", "at least one sample interval is required"));
        }
        let rule = self.theta_rule;
        if !(rule.alpha > 0.0 && rule.alpha < 1.0) {
            return Err(Error::param("alpha", format!("{} is not in (0, 1)", rule.alpha)));
        }
        if let RateConstant::Fixed(c) = rule.c {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::param("c", format!("{c} must be positive")));
            }
        }
        let mut seen = self.norms.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.norms.len() {
            return Err(Error::param("norms", "duplicate entries"));
        }
        self.solver.validate()?;
        self.initial.validate()
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.n, self.length)
    }

    pub fn sample_times(&self) -> Vec<f64> {
        uniform_times(self.t_final, self.samples)
    }
}

/// Differences between one QGSW case and the Euler reference at a sample time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseSample {
    pub t: f64,
    pub l1: f64,
    pub l2: f64,
    pub l4: f64,
    pub linf: f64,
    pub u_l2: f64,
    pub u_linf: f64,
    pub xnorm: f64,
    /// `‖𝟙_{|D|≥Θ}ω_λ‖₂`; absent when no `Θ` could be chosen.
    pub hipass_l2: Option<f64>,
    /// `‖𝟙_{Θ/12≤|D|≤8Θ/3}ω_λ‖₂`.
    pub annulus_l2: Option<f64>,
}

impl CaseSample {
    pub fn get(&self, norm: NormKind) -> Option<f64> {
        Some(match norm {
            NormKind::L1 => self.l1,
            NormKind::L2 => self.l2,
            NormKind::L4 => self.l4,
            NormKind::Linf => self.linf,
            NormKind::UL2 => self.u_l2,
            NormKind::ULinf => self.u_linf,
            NormKind::Xnorm => self.xnorm,
            NormKind::Hipass => return self.hipass_l2,
            NormKind::Annulus => return self.annulus_l2,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub case_index: usize,
    pub lambda: f64,
    pub steps: usize,
    pub theta: Option<f64>,
    pub predicted_bound: Option<f64>,
    pub samples: Vec<CaseSample>,
}

impl CaseResult {
    /// `sup_t` of a norm over the sample times.
    pub fn sup(&self, norm: NormKind) -> Option<f64> {
        self.samples
            .iter()
            .map(|s| s.get(norm))
            .try_fold(0.0f64, |acc, v| v.map(|v| acc.max(v)))
    }
}

/// Euler run summary stored in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceSummary {
    pub steps: usize,
    pub times: Vec<f64>,
    pub l2: Vec<f64>,
    pub hamiltonian: Vec<f64>,
    pub removed_mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub euler_reference: ReferenceSummary,
    pub cases: Vec<CaseResult>,
    pub fits: Vec<RateFit>,
    /// Constant used for `predicted_bound` and `Θ_λ`.
    pub rate_constant: Option<f64>,
}

impl SweepReport {
    /// Whether every case satisfies `sup_t err_X ≤ predicted_bound` with the shared constant.
    pub fn scaling_consistent(&self) -> Option<bool> {
        self.cases
            .iter()
            .map(|c| Some(c.sup(NormKind::Xnorm)? <= c.predicted_bound? * (1.0 + 1e-12)))
            .collect::<Option<Vec<bool>>>()
            .map(|v| v.into_iter().all(|b| b))
    }

    pub fn fit(&self, norm: NormKind) -> Option<&RateFit> {
        self.fits.iter().find(|f| f.norm == norm.name())
    }

    /// `sup_t` of a norm for each case, in λ order.
    pub fn sups(&self, norm: NormKind) -> Option<Vec<f64>> {
        self.cases.iter().map(|c| c.sup(norm)).collect()
    }
}

/// Euler trajectory from the shared initial data, with velocities at each sample.
pub struct EulerReference {
    pub omega0: ScalarField,
    pub removed_mean: f64,
    pub t_final: f64,
    pub trajectory: Trajectory,
    velocities: Vec<VectorField>,
}

impl EulerReference {
    pub fn new(omega0: &ScalarField, t_final: f64, times: &[f64], cfg: &SolverConfig) -> Result<Self> {
        let trajectory = simulate(omega0, 0.0, t_final, cfg, times)?;
        let velocities = trajectory
            .snapshots
            .iter()
            .map(|w| velocity_from_vorticity(w, 0.0))
            .collect::<Result<Vec<_>>>()?;
        Ok(EulerReference {
            omega0: omega0.clone(),
            removed_mean: 0.0,
            t_final,
            trajectory,
            velocities,
        })
    }

    pub fn summary(&self) -> ReferenceSummary {
        ReferenceSummary {
            steps: self.trajectory.diagnostics.len() - 1,
            times: self.trajectory.times.clone(),
            l2: self.trajectory.snapshots.iter().map(|w| w.l2_norm()).collect(),
            hamiltonian: self
                .trajectory
                .snapshots
                .iter()
                .map(|w| crate::spectral::hamiltonian(w, 0.0).unwrap_or(f64::NAN))
                .collect(),
            removed_mean: self.removed_mean,
        }
    }
}

fn difference_samples(reference: &EulerReference, traj: &Trajectory) -> Result<Vec<CaseSample>> {
    let family = DyadicFamily::default();
    traj.snapshots
        .iter()
        .zip(&reference.trajectory.snapshots)
        .zip(&reference.velocities)
        .zip(&traj.times)
        .map(|(((w, big_w), v), &t)| {
            // both fields are mean-free; only round-off survives in the difference's mean
            let f = project_mean_zero(&w.sub(big_w)?).0;
            let du = velocity_from_vorticity(w, traj.lambda)?.sub(v)?;
            Ok(CaseSample {
                t,
                l1: f.lp_norm(Exponent::Finite(1.0)),
                l2: f.l2_norm(),
                l4: f.lp_norm(Exponent::Finite(4.0)),
                linf: f.max_abs(),
                u_l2: du.l2_norm(),
                u_linf: du.max_magnitude(),
                xnorm: family.x_norm(&f, -1.0, Exponent::Finite(2.0), Exponent::Infinity)?,
                hipass_l2: None,
                annulus_l2: None,
            })
        })
        .collect()
}

fn fill_truncated(samples: &mut [CaseSample], traj: &Trajectory, theta: f64) -> Result<()> {
    for (s, w) in samples.iter_mut().zip(&traj.snapshots) {
        s.hipass_l2 = Some(sharp_highpass(w, theta)?.l2_norm());
        s.annulus_l2 = Some(annulus_project(w, theta / 12.0, 8.0 * theta / 3.0)?.l2_norm());
    }
    Ok(())
}

/// One QGSW run compared against the reference; `theta` enables the truncated-mass columns.
pub fn run_case(
    reference: &EulerReference,
    lambda: f64,
    cfg: &SolverConfig,
    theta: Option<f64>,
) -> Result<CaseResult> {
    let traj = simulate(
        &reference.omega0,
        lambda,
        reference.t_final,
        cfg,
        &reference.trajectory.times,
    )?;
    let mut samples = difference_samples(reference, &traj)?;
    if let Some(theta) = theta {
        fill_truncated(&mut samples, &traj, theta)?;
    }
    Ok(CaseResult {
        case_index: 0,
        lambda,
        steps: traj.diagnostics.len() - 1,
        theta,
        predicted_bound: None,
        samples,
    })
}

/// Runs the sweep on a pool of `threads` workers; the result does not depend on `threads`.
pub fn run_sweep(cfg: &SweepConfig, threads: usize) -> Result<SweepReport> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::param("threads", e.to_string()))?;
    pool.install(|| sweep_in_pool(cfg))
}

fn sweep_in_pool(cfg: &SweepConfig) -> Result<SweepReport> {
    let grid = cfg.grid()?;
    let (omega0, mean) = cfg.initial.sample(&grid)?;
    let times = cfg.sample_times();
    let mut reference = EulerReference::new(&omega0, cfg.t_final, &times, &cfg.solver)?;
    reference.removed_mean = mean;

    let runs: Vec<(Trajectory, Vec<CaseSample>)> = cfg
        .lambdas
        .par_iter()
        .map(|&lambda| {
            let traj = simulate(&omega0, lambda, cfg.t_final, &cfg.solver, &times)?;
            let samples = difference_samples(&reference, &traj)?;
            Ok((traj, samples))
        })
        .collect::<Result<_>>()?;

    let t = cfg.t_final;
    let rate_constant = match cfg.theta_rule.c {
        RateConstant::Fixed(c) => Some(c),
        RateConstant::Fit => runs.first().and_then(|(traj, samples)| {
            let err = samples.iter().map(|s| s.xnorm).fold(0.0, f64::max);
            fit_rate_constant(err, 0.0, traj.lambda, t)
        }),
    };

    let cases: Vec<CaseResult> = runs
        .into_par_iter()
        .enumerate()
        .map(|(case_index, (traj, mut samples))| {
            let lambda = traj.lambda;
            let theta = match rate_constant {
                Some(c) => Some(theta_rule(lambda, t, c, cfg.theta_rule.alpha)?),
                None => None,
            };
            if let Some(theta) = theta {
                fill_truncated(&mut samples, &traj, theta)?;
            }
            Ok(CaseResult {
                case_index,
                lambda,
                steps: traj.diagnostics.len() - 1,
                theta,
                predicted_bound: rate_constant.map(|c| predicted_bound(0.0, lambda, t, c)),
                samples,
            })
        })
        .collect::<Result<_>>()?;

    let mut fits = Vec::new();
    for &norm in &cfg.norms {
        let points: Option<Vec<(f64, f64)>> =
            cases.iter().map(|c| Some((c.lambda, c.sup(norm)?))).collect();
        if let Some(points) = points {
            if let Ok(mut fit) = fit_rate(&points) {
                fit.norm = norm.name().to_string();
                if norm == NormKind::Xnorm {
                    fit.envelope = rate_constant.map(|c| 0.5 * (-c * t).exp());
                }
                fits.push(fit);
            }
        }
    }

    Ok(SweepReport {
        config: cfg.clone(),
        euler_reference: reference.summary(),
        cases,
        fits,
        rate_constant,
    })
}
