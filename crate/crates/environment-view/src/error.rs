//! Errors raised by environment computations.

use chain_core::ChainError;
use rem_model::RemError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EnvError {
    #[error("energy table of length {got} does not match N = {n}")]
    DimensionMismatch { n: usize, got: usize },
    #[error("N = {n} exceeds the exact-computation cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Rem(#[from] RemError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

pub type Result<T> = std::result::Result<T, EnvError>;
