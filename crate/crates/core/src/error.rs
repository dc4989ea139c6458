use thiserror::Error;

/// Errors raised by the simulation and estimation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CascadeError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "covariance factorization failed on a {n}x{n} grid (pivot {pivot}, jitter reached {jitter:.3e}, \
         diagonal range [{min_diag:.3e}, {max_diag:.3e}])"
    )]
    Synthesis {
        n: usize,
        pivot: usize,
        jitter: f64,
        min_diag: f64,
        max_diag: f64,
    },

    #[error("grid of {n} points exceeds the dense synthesis limit of {limit}; use block-wise generation")]
    GridTooLarge { n: usize, limit: usize },

    #[error("cone discretization needs {cells} cells, above the cap of {cap}")]
    MemoryCap { cells: usize, cap: usize },

    #[error("exp overflow at index {index} (omega = {value})")]
    Overflow { index: usize, value: f64 },

    #[error("non-positive measure increment at index {index} ({value:e})")]
    NonPositiveIncrement { index: usize, value: f64 },

    #[error("second moment diverges for lambda2 = {0} (requires lambda2 < 1)")]
    Divergence(f64),

    #[error("quadrature did not converge (estimate {estimate}, error {error:e})")]
    Quadrature { estimate: f64, error: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, CascadeError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(CascadeError::InvalidParameter(msg.into()))
}
