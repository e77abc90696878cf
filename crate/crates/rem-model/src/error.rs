//! Errors raised by the model.

use chain_core::ChainError;
use poincare_bounds::BoundError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RemError {
    #[error("N = {n} exceeds the exact-chain cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

pub type Result<T> = std::result::Result<T, RemError>;
