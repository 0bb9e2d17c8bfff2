use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter `{name}` = {value} is outside its domain: {reason}")]
    ParameterDomain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("numerical convergence failure: {0}")]
    Convergence(String),

    #[error("degenerate grid: nodes must be distinct and strictly increasing (violated at index {index})")]
    DegenerateGrid { index: usize },

    #[error("shape mismatch: expected length {expected}, got {found}")]
    Shape { expected: usize, found: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("non-finite entry in assembled system at ({row}, {col})")]
    Assembly { row: usize, col: usize },

    #[error("linear system is numerically singular (pivot {pivot:e} at column {column})")]
    SingularSystem { column: usize, pivot: f64 },

    #[error("reference quadrature did not reach tolerance {tol:e} (last change {last_change:e})")]
    OracleFailure { tol: f64, last_change: f64 },

    #[error("evaluation point {0} lies outside [-1, 1]")]
    OutsideDomain(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
