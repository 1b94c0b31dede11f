//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by any stage of the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A simplex id was not found in the complex it was used against.
    #[error("unknown simplex id {0}")]
    UnknownSimplex(usize),

    /// Chains of different dimensions were combined.
    #[error("chain dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    /// An argument violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A mesh failed a topology requirement (closedness, manifoldness, ...).
    #[error("topology error: {0}")]
    Topology(String),

    /// A volumetric complex does not contain the surface as a subcomplex.
    #[error("conformance error: {0}")]
    Conformance(String),

    /// Geometric configuration too degenerate to proceed.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    /// A text record could not be parsed.
    #[error("parse error at {path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    /// A pipeline stage failed; wraps the underlying error with stage context.
    #[error("stage '{stage}' failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid_argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn topology(msg: impl Into<String>) -> Self {
        Error::Topology(msg.into())
    }

    /// Wrap an error with the name of the pipeline stage that raised it.
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
