use thiserror::Error;

/// Errors raised by graph construction, algebra, and the Betti engines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("subspaces live on different monomial bases")]
    BasisMismatch,

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("Betti table is truncated: {0}")]
    Truncated(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn hypothesis(msg: impl Into<String>) -> Self {
        Error::Hypothesis(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
