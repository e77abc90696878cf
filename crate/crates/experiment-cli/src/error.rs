//! Errors raised by configuration, orchestration and output.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{got} seeds for N = {n}, beta = {beta}; at least {need} are required")]
    InsufficientSeeds { n: usize, beta: f64, got: usize, need: usize },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Chain(#[from] chain_core::ChainError),
    #[error(transparent)]
    Bound(#[from] poincare_bounds::BoundError),
    #[error(transparent)]
    Paths(#[from] canonical_paths::PathsError),
    #[error(transparent)]
    Rem(#[from] rem_model::RemError),
    #[error(transparent)]
    Env(#[from] environment_view::EnvError),
}

pub type Result<T> = std::result::Result<T, CliError>;
