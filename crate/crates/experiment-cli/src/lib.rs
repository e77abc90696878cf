//! Configuration-driven experiments on Metropolis dynamics of the Random
//! Energy Model, and the `mixbound` command-line tool.
//!
//! A sweep runs every `(N, beta, seed)` tuple of a versioned JSON config:
//! it brackets the exact uniform-start mixing time, computes the spectral gap
//! and, when enabled, path-based bounds on the functional constants and the
//! mixing-time bound built from them. Per-group seed quantiles estimate
//! `T_N`. All outputs carry a schema version and SHA-256 input digests.

pub mod commands;
pub mod config;
pub mod digest;
pub mod error;
pub mod estimator;
pub mod output;
pub mod sweep;

pub use commands::{
    bounds_command, bounds_from_text, env_command, paths_command, rem_command, sweep_from_text, BoundsArgs,
    CommandOutput, EnvArgs, ModelArgs, OutputArgs, PathsArgs, RemArgs,
};
pub use config::{BetaUnits, ExperimentConfig, OutputFormat, OutputSpec, ParameterSpec, SeedSpec, CONFIG_SCHEMA_VERSION};
pub use digest::sha256_hex;
pub use error::{CliError, Result};
pub use estimator::{t_n_estimator, wilson_interval, TNEstimate};
pub use output::{Verdicts, SCHEMA_VERSION};
pub use sweep::{run_sweep, sweep_one, SweepRecord};
