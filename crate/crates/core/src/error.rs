use thiserror::Error;

/// Errors raised by the solver, analysis and harness layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("field mean {mean:e} is not zero (relative to L2 norm {norm:e}); Poisson inversion is ill-posed")]
    NonZeroMean { mean: f64, norm: f64 },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("velocity field is not divergence-free (max spectral divergence {0:e})")]
    NonSolenoidal(f64),

    #[error("time step {dt:e} exceeds the CFL limit {limit:e} at t = {time}")]
    CflViolation { dt: f64, limit: f64, time: f64 },

    #[error("non-finite value detected at t = {time} after {steps} steps")]
    NonFinite { time: f64, steps: usize },

    #[error("requested time {time} outside the covered range [{start}, {end}]")]
    TimeOutOfRange { time: f64, start: f64, end: f64 },

    #[error("invalid patch: {0}")]
    InvalidPatch(String),

    #[error("config error at line {line}: {message}")]
    ConfigSyntax { line: usize, message: String },

    #[error("config key `{key}`: {message}")]
    ConfigKey { key: String, message: String },

    #[error("snapshot format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Numerical,
    Io,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::CflViolation { .. } | Error::NonFinite { .. } => ErrorKind::Numerical,
            Error::Io(_) | Error::Csv(_) | Error::Format(_) => ErrorKind::Io,
            Error::Json(e) if e.is_io() => ErrorKind::Io,
            _ => ErrorKind::Validation,
        }
    }

    pub(crate) fn param(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
