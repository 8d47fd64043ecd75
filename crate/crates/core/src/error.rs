use thiserror::Error;

/// Failures reported by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degree {degree} exceeds the log-scaled recurrence cap {cap}")]
    DegreeOverflow { degree: usize, cap: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular or ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error bound {error_bound:e})"
    )]
    Quadrature {
        estimate: f64,
        error_bound: f64,
        subdivisions: usize,
    },

    #[error("tolerance check failed: {0}")]
    Tolerance(String),

    #[error("index {index} out of range (limit {limit})")]
    Index { index: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
