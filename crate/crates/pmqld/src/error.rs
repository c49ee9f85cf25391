//! Crate-wide error type.

/// Errors produced by this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter constraint was violated at construction time.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A numerical procedure failed to converge or produced a non-finite value.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Input data is malformed or insufficient.
    #[error("data error: {0}")]
    Data(String),

    /// An estimation routine could not produce a solution.
    #[error("estimation error: {0}")]
    Estimation(String),

    /// An optimizer exhausted every start without converging.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// A goodness-of-fit computation could not be carried out.
    #[error("goodness-of-fit error: {0}")]
    Gof(String),
}

pub type Result<T> = std::result::Result<T, Error>;
