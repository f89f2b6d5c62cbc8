use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::patches::{overlap_measures, PatchSpec};
use crate::spectral::{project_mean_zero, Grid};
use crate::transport::{simulate, uniform_times, SolverConfig};

const ENDPOINT_BOX: f64 = 6.0 * std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatchStudyConfig {
    pub patch: PatchSpec,
    pub n: usize,
    pub length: f64,
    pub lambda: f64,
    pub t_final: f64,
    pub samples: usize,
    pub solver: SolverConfig,
    /// Level that `supDifference` must reach on the window.
    pub threshold: f64,
    pub min_window: f64,
}

impl PatchStudyConfig {
    pub fn new(patch: PatchSpec, n: usize, lambda: f64) -> Self {
        PatchStudyConfig {
            patch,
            n,
            length: 2.0 * std::f64::consts::PI,
            lambda,
            t_final: 1.0,
            samples: 50,
            solver: SolverConfig::patch(),
            threshold: 0.9,
            min_window: 0.2,
        }
    }

    /// Box of side `6π` holding an `a = 5, b = 2.5` ellipse at its center.
    pub fn endpoint_ellipse(n: usize, lambda: f64) -> Self {
        let length = ENDPOINT_BOX;
        let c = 0.5 * length;
        PatchStudyConfig {
            length,
            ..Self::new(PatchSpec::ellipse([c, c], 5.0, 2.5, 0.0), n, lambda)
        }
    }

    /// Control run: a disc of radius 2.5 in the same box.
    pub fn endpoint_disc(n: usize, lambda: f64) -> Self {
        let length = ENDPOINT_BOX;
        let c = 0.5 * length;
        PatchStudyConfig {
            length,
            ..Self::new(PatchSpec::disc([c, c], 2.5), n, lambda)
        }
    }

    pub fn validate(&self) -> Result<()> {
        Grid::new(self.n, self.length)?;
        self.patch.validate()?;
        self.solver.validate()?;
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::param("lambda", format!("{} must be positive", self.lambda)));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::param("t_final", format!("{} must be positive", self.t_final)));
        }
        if self.samples == 0 {
            return Err(Error::param("samples", "at least one sample interval is required"));
        }
        if !(self.min_window >= 0.0) {
            return Err(Error::param("min_window", "must be nonnegative"));
        }
        Ok(())
    }
}

/// QGSW against Euler from the same patch datum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatchStudyReport {
    pub config: PatchStudyConfig,
    pub times: Vec<f64>,
    pub sup_difference: Vec<f64>,
    pub symmetric_difference_area: Vec<f64>,
    pub intersection_area: Vec<f64>,
    /// Longest run of consecutive samples with `supDifference ≥ threshold`.
    pub window: Option<[f64; 2]>,
    /// Whether that window is at least `min_window` long.
    pub exceeds: bool,
}

impl PatchStudyReport {
    pub fn window_length(&self) -> f64 {
        self.window.map_or(0.0, |[a, b]| b - a)
    }

    pub fn max_sup_difference(&self) -> f64 {
        self.sup_difference.iter().copied().fold(0.0, f64::max)
    }
}

fn longest_window(times: &[f64], values: &[f64], threshold: f64) -> Option<[f64; 2]> {
    let mut best: Option<[f64; 2]> = None;
    let mut start: Option<usize> = None;
    for i in 0..=values.len() {
        let above = i < values.len() && values[i] >= threshold;
        match (above, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                let w = [times[s], times[i - 1]];
                if best.is_none_or(|b| w[1] - w[0] > b[1] - b[0]) {
                    best = Some(w);
                }
                start = None;
            }
            _ => {}
        }
    }
    best
}

/// Evolves the patch under both laws and compares the two fields at every sample.
///
/// Geometry uses the patch level set `{ω ≥ amplitude/2}` with the removed mean added back.
pub fn endpoint_patch_study(cfg: &PatchStudyConfig) -> Result<PatchStudyReport> {
    cfg.validate()?;
    let grid = Grid::new(cfg.n, cfg.length)?;
    let (omega0, mean) = project_mean_zero(&cfg.patch.rasterize(&grid)?);
    let times = uniform_times(cfg.t_final, cfg.samples);
    let (euler, qgsw) = rayon::join(
        || simulate(&omega0, 0.0, cfg.t_final, &cfg.solver, &times),
        || simulate(&omega0, cfg.lambda, cfg.t_final, &cfg.solver, &times),
    );
    let (euler, qgsw) = (euler?, qgsw?);
    let level = 0.5 * cfg.patch.amplitude;
    let mut sup_difference = Vec::with_capacity(times.len());
    let mut symmetric_difference_area = Vec::with_capacity(times.len());
    let mut intersection_area = Vec::with_capacity(times.len());
    for (a, b) in qgsw.snapshots.iter().zip(&euler.snapshots) {
        let m = overlap_measures(&a.offset(mean), &b.offset(mean), level)?;
        sup_difference.push(m.sup_difference);
        symmetric_difference_area.push(m.symmetric_difference_area);
        intersection_area.push(m.intersection_area);
    }
    let window = longest_window(&times, &sup_difference, cfg.threshold);
    let exceeds = window.is_some_and(|[a, b]| b - a >= cfg.min_window);
    Ok(PatchStudyReport {
        config: cfg.clone(),
        times,
        sup_difference,
        symmetric_difference_area,
        intersection_area,
        window,
        exceeds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows() {
        let t = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5];
        assert_eq!(longest_window(&t, &[0.0, 1.0, 0.0, 1.0, 1.0, 1.0], 0.9), Some([0.3, 0.5]));
        assert_eq!(longest_window(&t, &[0.0; 6], 0.9), None);
        assert_eq!(longest_window(&t, &[1.0; 6], 0.9), Some([0.0, 0.5]));
    }
}
