//! Errors raised by bound evaluation.

use chain_core::ChainError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error("denominator vanishes for this test function")]
    ZeroDenominator,
    #[error("test function is not centered: pi(f) = {mean:e}")]
    NotCentered { mean: f64 },
    #[error("no path from {x} to {y}")]
    PathMissing { x: usize, y: usize },
    #[error("path uses ({x},{y}), which has zero conductance")]
    ZeroConductanceEdge { x: usize, y: usize },
    #[error("invalid partition: {0}")]
    PartitionInvalid(String),
    #[error("non-positive input: {0}")]
    NonPositiveInput(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

pub type Result<T> = std::result::Result<T, BoundError>;
