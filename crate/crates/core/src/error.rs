//! Error type shared by all modules.

use thiserror::Error;

/// Errors for state validation, channel application, and the optimizers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("not Hermitian (max |A - A^H| entry {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("trace is not 1 (got {trace})")]
    TraceNotOne { trace: f64 },

    #[error("Kraus completeness violated (max |sum K^H K - I| entry {defect:e})")]
    KrausIncomplete { defect: f64 },

    #[error("row {row} of conditional distribution sums to {sum}, not 1")]
    NonStochastic { row: usize, sum: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
