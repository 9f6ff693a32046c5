use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A model parameter falls outside the domain required by a named assumption.
    #[error("{assumption} violated: {detail}")]
    Assumption {
        assumption: &'static str,
        detail: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The learning rate leaves the range where a formula is defined.
    #[error("learning rate {eta} outside the valid range {range}")]
    LearningRateDomain { eta: f64, range: String },

    #[error("noiseless problem has no finite approximately optimal learning rate; minimize the bias term with the largest stable step instead")]
    Noiseless,

    #[error("SGD diverged at step {step} (seed {seed:#018x})")]
    Diverged { step: u64, seed: u64 },

    #[error("risk function is non-finite on the whole search grid")]
    NonFiniteRisk,

    #[error("one-pass risk curve exhausted: target {target:e} not reached by N' = {cap:e}")]
    CurveExhausted { target: f64, cap: f64 },

    #[error("target risk {target:e} outside the tabulated curve range [{lo:e}, {hi:e}]")]
    OutsideCurve { target: f64, lo: f64, hi: f64 },

    #[error("degenerate fit input: {0}")]
    DegenerateFit(String),

    #[error("no rows to write")]
    EmptyRows,

    #[error("invalid config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
