use thiserror::Error;

/// Errors raised by the eqmf library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported depth {0} (expected 1..=4)")]
    UnsupportedDepth(u32),

    #[error("unsupported weight: {0}")]
    UnsupportedWeight(String),

    #[error("insufficient precision: need at least {needed} coefficients, got {got}")]
    InsufficientPrecision { needed: usize, got: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("not a cusp form: constant term is {0}")]
    NotCuspForm(String),
}

pub type Result<T> = std::result::Result<T, Error>;
