use thiserror::Error;

/// Errors raised by the imaging library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Invalid construction parameters (geometry, counts, grid).
    #[error("configuration error: {0}")]
    Config(String),
    /// Data that makes an indicator undefined (zero norms, empty scenes).
    #[error("degenerate data: {0}")]
    Degenerate(String),
    /// Non-finite values produced during evaluation.
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("data integrity error: {0}")]
    DataIntegrity(String),
    #[error("empty selection: {0}")]
    EmptySelection(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
