//! TOML run configuration with strict key checking.

use std::f64::consts::PI;
use std::path::PathBuf;

use serde::Deserialize;
use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::harness::{
    Blob, Format, InitialData, NormKind, PatchStudyConfig, SweepConfig, ThetaRule,
};
use crate::littlewood_paley::BesovSpec;
use crate::patches::{PatchSpec, PATCH_KEYS};
use crate::spectral::{Exponent, Grid};
use crate::transport::{SolverConfig, SpectralFilter};

/// Allowed keys of a table; `None` for leaves.
struct Schema(&'static [(&'static str, Option<&'static Schema>)]);

const PATCH_SCHEMA: Schema = Schema(&[
    ("shape", None),
    ("radius", None),
    ("a", None),
    ("b", None),
    ("orientation", None),
    ("vertices", None),
    ("center", None),
    ("amplitude", None),
    ("mollify_width", None),
]);
const BLOB_SCHEMA: Schema = Schema(&[("center", None), ("amplitude", None), ("width", None)]);
const GRID_SCHEMA: Schema = Schema(&[("n", None), ("length", None)]);
const SOLVER_SCHEMA: Schema = Schema(&[
    ("cfl", None),
    ("dt", None),
    ("max_dt", None),
    ("filter", None),
    ("filter_alpha", None),
    ("filter_order", None),
]);
const INITIAL_SCHEMA: Schema = Schema(&[
    ("kind", None),
    ("blobs", Some(&BLOB_SCHEMA)),
    ("patch", Some(&PATCH_SCHEMA)),
]);
const THETA_SCHEMA: Schema = Schema(&[("c", None), ("alpha", None)]);
const SWEEP_SCHEMA: Schema = Schema(&[
    ("lambdas", None),
    ("t_final", None),
    ("samples", None),
    ("norms", None),
    ("theta_rule", Some(&THETA_SCHEMA)),
]);
const SIMULATE_SCHEMA: Schema = Schema(&[
    ("lambda", None),
    ("t_final", None),
    ("snapshots_per_unit_time", None),
]);
const PATCH_STUDY_SCHEMA: Schema = Schema(&[
    ("preset", None),
    ("lambda", None),
    ("t_final", None),
    ("samples", None),
    ("threshold", None),
    ("min_window", None),
]);
const KERNELS_SCHEMA: Schema = Schema(&[
    ("lambda", None),
    ("r_min", None),
    ("r_max", None),
    ("points", None),
]);
const BESOV_SCHEMA: Schema = Schema(&[("s", None), ("p", None), ("q", None)]);
const XNORM_SCHEMA: Schema = Schema(&[("s", None), ("p", None), ("r", None)]);
const NORMS_SCHEMA: Schema = Schema(&[
    ("snapshot", None),
    ("besov", Some(&BESOV_SCHEMA)),
    ("xnorm", Some(&XNORM_SCHEMA)),
]);
const OUTPUT_SCHEMA: Schema = Schema(&[("dir", None), ("formats", None)]);
const ROOT_SCHEMA: Schema = Schema(&[
    ("grid", Some(&GRID_SCHEMA)),
    ("solver", Some(&SOLVER_SCHEMA)),
    ("initial", Some(&INITIAL_SCHEMA)),
    ("sweep", Some(&SWEEP_SCHEMA)),
    ("simulate", Some(&SIMULATE_SCHEMA)),
    ("patch_study", Some(&PATCH_STUDY_SCHEMA)),
    ("kernels", Some(&KERNELS_SCHEMA)),
    ("norms", Some(&NORMS_SCHEMA)),
    ("output", Some(&OUTPUT_SCHEMA)),
]);

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn key_line(text: &str, key: &str) -> Option<usize> {
    text.lines().position(|l| {
        let l = l.trim_start();
        l.strip_prefix(key)
            .is_some_and(|rest| rest.trim_start().starts_with('='))
    })
    .map(|i| i + 1)
}

fn suggest(key: &str, schema: &Schema) -> Option<&'static str> {
    schema
        .0
        .iter()
        .map(|(k, _)| (*k, strsim::levenshtein(key, k)))
        .filter(|(k, d)| *d <= 2.max(k.len() / 3))
        .min_by_key(|(_, d)| *d)
        .map(|(k, _)| k)
}

fn check_keys(table: &Table, schema: &Schema, path: &str, text: &str) -> Result<()> {
    for (key, value) in table {
        let full = if path.is_empty() {
            key.clone()
        } else {
            format!("{path}.{key}")
        };
        let Some((_, child)) = schema.0.iter().find(|(k, _)| k == key) else {
            let mut message = String::from("unknown key");
            if let Some(line) = key_line(text, key) {
                message.push_str(&format!(" (line {line})"));
            }
            if let Some(s) = suggest(key, schema) {
                message.push_str(&format!("; did you mean `{s}`?"));
            }
            return Err(Error::ConfigKey { key: full, message });
        };
        if let Some(child) = child {
            match value {
                Value::Table(t) => check_keys(t, child, &full, text)?,
                Value::Array(items) => {
                    for item in items {
                        if let Value::Table(t) = item {
                            check_keys(t, child, &full, text)?;
                        }
                    }
                }
                _ => {}
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default)]
struct RawGrid {
    n: Option<usize>,
    length: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default)]
struct RawSolver {
    cfl: Option<f64>,
    dt: Option<f64>,
    max_dt: Option<f64>,
    filter: Option<bool>,
    filter_alpha: Option<f64>,
    filter_order: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default)]
struct RawInitial {
    kind: Option<String>,
    blobs: Option<Vec<Blob>>,
    patch: Option<PatchSpec>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default)]
struct RawSweep {
    lambdas: Option<Vec<f64>>,
    t_final: Option<f64>,
    samples: Option<usize>,
    norms: Option<Vec<String>>,
    theta_rule: Option<ThetaRule>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default)]
struct RawSimulate {
    lambda: Option<f64>,
    t_final: Option<f64>,
    snapshots_per_unit_time: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default)]
struct RawPatchStudy {
    preset: Option<String>,
    lambda: Option<f64>,
    t_final: Option<f64>,
    samples: Option<usize>,
    threshold: Option<f64>,
    min_window: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default)]
struct RawKernels {
    lambda: Option<f64>,
    r_min: Option<f64>,
    r_max: Option<f64>,
    points: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default)]
struct RawXnorm {
    s: Option<f64>,
    p: Option<Exponent>,
    r: Option<Exponent>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default)]
struct RawNorms {
    snapshot: Option<PathBuf>,
    besov: Option<Vec<BesovSpec>>,
    xnorm: Option<RawXnorm>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default)]
struct RawOutput {
    dir: Option<PathBuf>,
    formats: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default)]
struct RawConfig {
    grid: RawGrid,
    solver: RawSolver,
    initial: RawInitial,
    sweep: RawSweep,
    simulate: RawSimulate,
    patch_study: RawPatchStudy,
    kernels: RawKernels,
    norms: RawNorms,
    output: RawOutput,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateSettings {
    pub lambda: f64,
    pub t_final: f64,
    pub snapshots_per_unit_time: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatchPreset {
    /// The patch from `[initial]` in the configured box.
    Initial,
    Ellipse,
    Disc,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelSettings {
    pub lambda: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormSettings {
    pub snapshot: Option<PathBuf>,
    pub besov: Vec<BesovSpec>,
    /// `(s, p, r)` of the `X` norm; `None` skips it.
    pub xnorm: Option<(f64, Exponent, Exponent)>,
}

/// Fully validated configuration shared by all subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub sweep: SweepConfig,
    pub simulate: SimulateSettings,
    pub patch_study: PatchStudyConfig,
    pub patch_preset: PatchPreset,
    pub kernels: KernelSettings,
    pub norms: NormSettings,
    pub output_dir: Option<PathBuf>,
    pub formats: Vec<Format>,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::param(name, format!("{v} must be positive")))
    }
}

fn solver_from(raw: &RawSolver, patch_data: bool) -> Result<SolverConfig> {
    let defaults = SpectralFilter::default();
    let filter_on = raw.filter.unwrap_or(patch_data);
    let cfg = SolverConfig {
        cfl: raw.cfl.unwrap_or(0.5),
        dt: raw.dt,
        max_dt: raw.max_dt,
        filter: filter_on.then(|| SpectralFilter {
            alpha: raw.filter_alpha.unwrap_or(defaults.alpha),
            order: raw.filter_order.unwrap_or(defaults.order),
        }),
    };
    if let Some(a) = raw.filter_alpha {
        positive("filter_alpha", a)?;
    }
    if let Some(m) = raw.filter_order {
        positive("filter_order", m)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn initial_from(raw: &RawInitial, length: f64) -> Result<InitialData> {
    let kind = raw.kind.as_deref().unwrap_or(if raw.patch.is_some() {
        "patch"
    } else if raw.blobs.is_some() {
        "blobs"
    } else {
        "two-blob"
    });
    let data = match kind {
        "two-blob" => InitialData::two_blob(length),
        "blobs" => InitialData::Blobs {
            blobs: raw
                .blobs
                .clone()
                .ok_or_else(|| Error::param("initial.blobs", "kind = \"blobs\" needs [[initial.blobs]]"))?,
        },
        "patch" => InitialData::Patch {
            patch: raw
                .patch
                .clone()
                .ok_or_else(|| Error::param("initial.patch", "kind = \"patch\" needs [initial.patch]"))?,
        },
        other => {
            return Err(Error::param(
                "initial.kind",
                format!("`{other}` is not one of two-blob, blobs, patch"),
            ))
        }
    };
    data.validate()?;
    Ok(data)
}

/// Parses and validates a configuration file. Unknown keys are errors.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let table: Table = text.parse().map_err(|e: toml::de::Error| Error::ConfigSyntax {
        line: e.span().map_or(0, |s| line_of(text, s.start)),
        message: e.message().to_string(),
    })?;
    check_keys(&table, &ROOT_SCHEMA, "", text)?;
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::ConfigSyntax {
        line: e.span().map_or(0, |s| line_of(text, s.start)),
        message: e.message().to_string(),
    })?;
    debug_assert!(PATCH_KEYS.iter().all(|k| PATCH_SCHEMA.0.iter().any(|(s, _)| s == k)));

    let n = raw.grid.n.unwrap_or(128);
    let length = positive("grid.length", raw.grid.length.unwrap_or(2.0 * PI))?;
    Grid::new(n, length)?;

    let initial = initial_from(&raw.initial, length)?;
    let solver = solver_from(&raw.solver, initial.is_patch())?;

    let defaults = SweepConfig::smooth_default(n);
    let norms = match &raw.sweep.norms {
        Some(list) => list
            .iter()
            .map(|s| s.parse::<NormKind>())
            .collect::<Result<Vec<_>>>()?,
        None => defaults.norms.clone(),
    };
    let sweep = SweepConfig {
        initial: initial.clone(),
        n,
        length,
        lambdas: raw.sweep.lambdas.clone().unwrap_or(defaults.lambdas),
        t_final: raw.sweep.t_final.unwrap_or(defaults.t_final),
        samples: raw.sweep.samples.unwrap_or(defaults.samples),
        solver: solver.clone(),
        theta_rule: raw.sweep.theta_rule.unwrap_or_default(),
        norms,
    };
    sweep.validate()?;

    let simulate = SimulateSettings {
        lambda: raw.simulate.lambda.unwrap_or(0.0),
        t_final: positive("simulate.t_final", raw.simulate.t_final.unwrap_or(1.0))?,
        snapshots_per_unit_time: raw.simulate.snapshots_per_unit_time.unwrap_or(100),
    };
    if !(simulate.lambda >= 0.0 && simulate.lambda.is_finite()) {
        return Err(Error::param("simulate.lambda", "must be nonnegative"));
    }
    if simulate.snapshots_per_unit_time == 0 {
        return Err(Error::param("simulate.snapshots_per_unit_time", "must be positive"));
    }

    let ps = &raw.patch_study;
    let lambda = ps.lambda.unwrap_or(0.5);
    let patch_preset = match ps.preset.as_deref() {
        None | Some("ellipse") if !initial.is_patch() || ps.preset.is_some() => PatchPreset::Ellipse,
        None => PatchPreset::Initial,
        Some("disc") => PatchPreset::Disc,
        Some("initial") => PatchPreset::Initial,
        Some(other) => {
            return Err(Error::param(
                "patch_study.preset",
                format!("`{other}` is not one of ellipse, disc, initial"),
            ))
        }
    };
    let mut patch_study = match patch_preset {
        PatchPreset::Ellipse => PatchStudyConfig::endpoint_ellipse(n, lambda),
        PatchPreset::Disc => PatchStudyConfig::endpoint_disc(n, lambda),
        PatchPreset::Initial => match &initial {
            InitialData::Patch { patch } => PatchStudyConfig {
                length,
                ..PatchStudyConfig::new(patch.clone(), n, lambda)
            },
            InitialData::Blobs { .. } => {
                return Err(Error::param(
                    "patch_study.preset",
                    "`initial` requires [initial] kind = \"patch\"",
                ))
            }
        },
    };
    patch_study.solver = solver_from(&raw.solver, true)?;
    if let Some(t) = ps.t_final {
        patch_study.t_final = t;
    }
    if let Some(s) = ps.samples {
        patch_study.samples = s;
    }
    if let Some(t) = ps.threshold {
        patch_study.threshold = t;
    }
    if let Some(w) = ps.min_window {
        patch_study.min_window = w;
    }
    patch_study.validate()?;

    let kernels = KernelSettings {
        lambda: positive("kernels.lambda", raw.kernels.lambda.unwrap_or(1.0))?,
        r_min: positive("kernels.r_min", raw.kernels.r_min.unwrap_or(1e-3))?,
        r_max: positive("kernels.r_max", raw.kernels.r_max.unwrap_or(20.0))?,
        points: raw.kernels.points.unwrap_or(500),
    };
    if kernels.r_max <= kernels.r_min || kernels.points < 2 {
        return Err(Error::param("kernels", "need r_min < r_max and at least 2 points"));
    }

    let besov = raw.norms.besov.clone().unwrap_or_default();
    let xnorm = raw.norms.xnorm.clone().unwrap_or_default();
    let norm_settings = NormSettings {
        snapshot: raw.norms.snapshot.clone(),
        besov,
        xnorm: Some((
            xnorm.s.unwrap_or(-1.0),
            xnorm.p.unwrap_or(Exponent::Finite(2.0)),
            xnorm.r.unwrap_or(Exponent::Infinity),
        )),
    };

    let formats = match &raw.output.formats {
        Some(list) => list.iter().map(|f| f.parse()).collect::<Result<Vec<Format>>>()?,
        None => vec![Format::Csv, Format::Json],
    };

    Ok(RunConfig {
        sweep,
        simulate,
        patch_study,
        patch_preset,
        kernels,
        norms: norm_settings,
        output_dir: raw.output.dir.clone(),
        formats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn patch_schema_matches_patch_keys() {
        assert_eq!(PATCH_SCHEMA.0.len(), PATCH_KEYS.len());
        for k in PATCH_KEYS {
            assert!(PATCH_SCHEMA.0.iter().any(|(s, _)| s == k));
        }
    }

    #[test]
    fn empty_config_uses_defaults() {
        let c = parse_config("").unwrap();
        assert_eq!(c.sweep.n, 128);
        assert_eq!(c.sweep.lambdas.len(), 5);
        assert!(c.sweep.solver.filter.is_none());
        assert!(c.patch_study.solver.filter.is_some());
        assert_eq!(c.patch_preset, PatchPreset::Ellipse);
    }

    #[test]
    fn suggestions() {
        assert_eq!(suggest("lamda", &SWEEP_SCHEMA), Some("lambdas"));
        assert_eq!(suggest("zzzzzz", &SWEEP_SCHEMA), None);
    }

    #[test]
    fn syntax_error_reports_line() {
        let err = parse_config("[grid]\nn = 64\nlength = = 3\n").unwrap_err();
        match err {
            Error::ConfigSyntax { line, .. } => assert_eq!(line, 3),
            other => panic!("{other}"),
        }
    }
}
