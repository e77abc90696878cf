//! Error type shared by all chain operations.

use thiserror::Error;

/// Failures raised while building or analysing a chain.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChainError {
    #[error("detailed balance violated on ({x},{y}): |pi(x)K(x,y) - pi(y)K(y,x)| = {residual:e}")]
    DetailedBalanceViolation { x: usize, y: usize, residual: f64 },
    #[error("rate graph is not connected ({reached} of {n} states reachable from state 0)")]
    NotIrreducible { reached: usize, n: usize },
    #[error("stationary weight at state {index} is not strictly positive ({value})")]
    NonPositivePi { index: usize, value: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not a probability vector: {0}")]
    InvalidProbability(String),
    #[error("invalid rate entry: {0}")]
    InvalidRate(String),
    #[error("eigensolver failure: {0}")]
    EigensolverFailure(String),
    #[error("time grid is empty")]
    EmptyGrid,
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("epsilon {epsilon} not reached before t_max = {t_max}")]
    NotReachedWithinHorizon { epsilon: f64, t_max: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, ChainError>;
