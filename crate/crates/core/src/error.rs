use thiserror::Error;

use crate::solver::FailedSolve;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A dense exact computation would exceed its size guard.
    #[error("resource guard exceeded: {0}")]
    Resource(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Input parsed but violates a structural property (e.g. latin property).
    #[error("validity error: {0}")]
    Validity(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The iterative solver hit its cap. Carries the best iterate seen.
    #[error("solver did not converge: {}", .0.summary())]
    NotConverged(Box<FailedSolve>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
