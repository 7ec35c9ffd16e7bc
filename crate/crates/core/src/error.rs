use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} = {value} exceeds the supported limit {limit}")]
    SizeLimit {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("order violation: {0}")]
    OrderViolation(String),

    #[error("singular Gram matrix for n = {n}, k = {k}")]
    SingularGram { n: usize, k: usize },

    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("covariance is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("linear algebra failure: {0}")]
    Linalg(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
