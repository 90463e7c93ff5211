use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A value violates an operation precondition (bad size, negative constant, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A run configuration is malformed or inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("time step {dt:e} exceeds explicit stability limit {limit:e}")]
    Stability { dt: f64, limit: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("solver diverged at node {node} (x = {point:?}): value {value}")]
    Divergence { node: usize, point: Vec<f64>, value: f64 },

    #[error("no steady state after {steps} steps (last increment {last_increment:e})")]
    NonConvergence { steps: u64, last_increment: f64 },

    #[error("evaluation failed at probe {probe:?}: {reason}")]
    Evaluation { probe: Vec<f64>, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code under the CLI contract: 1 for numerical failures
    /// (divergence, non-convergence), 2 for everything that is a bad request.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Divergence { .. } | Error::NonConvergence { .. } | Error::Evaluation { .. } => 1,
            _ => 2,
        }
    }
}
