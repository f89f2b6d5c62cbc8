//! λ-sweeps against the Euler reference, rate fits and report output.

mod initial;
mod patch_study;
mod rates;
mod report;
mod sweep;

pub use initial::{Blob, InitialData};
pub use patch_study::{endpoint_patch_study, PatchStudyConfig, PatchStudyReport};
pub use rates::{fit_rate, fit_rate_constant, predicted_bound, theta_rule, RateFit};
pub use report::{
    emit_patch_report, emit_report, parse_formats, svg_plot, write_csv, Format, CSV_COLUMNS,
};
pub use sweep::{
    run_case, run_sweep, CaseResult, CaseSample, EulerReference, NormKind, RateConstant,
    ReferenceSummary, SweepConfig, SweepReport, ThetaRule,
};
