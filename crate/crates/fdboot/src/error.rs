//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by construction, validation and resampling routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FdError {
    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: String },

    #[error("row {row} has length {got}, expected {expected}")]
    DimensionMismatch {
        row: usize,
        expected: usize,
        got: usize,
    },

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("curves are defined on different grids")]
    GridMismatch,

    #[error("need at least {needed} curves, got {got}")]
    InsufficientSample { needed: usize, got: usize },

    #[error("alpha = {alpha} is infeasible for n = {n}: ceil(alpha*n) must be <= n-1")]
    InfeasibleAlpha { alpha: f64, n: usize },

    #[error("gamma = {gamma} is infeasible for n = {n}: trimming leaves no curves")]
    InfeasibleGamma { gamma: f64, n: usize },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("cannot take a cut-off of an empty distance set")]
    EmptyDistances,

    #[error("covariance factorization failed: smallest eigenvalue {min_eigenvalue}")]
    Factorization { min_eigenvalue: f64 },
}

pub type Result<T> = std::result::Result<T, FdError>;
