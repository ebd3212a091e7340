use thiserror::Error;

/// Errors produced by the engine model, the protocol machinery and the search.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid protocol: {}", .0.join("; "))]
    InvalidProtocol(Vec<String>),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("catalyst is not restored by the cycle (residual {residual:.3e} > {tol:.1e})")]
    CyclicityViolated { residual: f64, tol: f64 },

    #[error("matrix is not column-stochastic: {0}")]
    NotStochastic(String),

    #[error("{what}: {levels} levels exceeds the default cap of {cap}; pass an explicit override to proceed")]
    CapExceeded {
        what: &'static str,
        levels: usize,
        cap: usize,
    },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
