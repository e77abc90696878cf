//! Errors raised by path construction.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PathsError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("N = {n} exceeds the path-family cap {max}")]
    TooLarge { n: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, PathsError>;
