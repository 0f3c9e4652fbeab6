use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge list is empty")]
    EmptyEdgeList,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("generation produced an empty graph ({0})")]
    DegenerateGraph(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("chain is reducible: node {node} and node 0 do not communicate")]
    Reducible { node: usize },

    #[error("graph too large for dense solve: {nodes} nodes (limit {limit})")]
    TooLarge { nodes: usize, limit: usize },

    #[error("calibration failed: no theta brings gamma within tolerance of {target}; scanned gamma range [{low:.3}, {high:.3}]")]
    Calibration { target: f64, low: f64, high: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Wraps an error with the name of the pipeline stage that produced it.
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
