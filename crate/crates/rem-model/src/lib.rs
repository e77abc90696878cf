//! The Random Energy Model on `{-1,+1}^N`.
//!
//! Energies are i.i.d. `N(0, N)`. The crate provides the Gibbs measure and
//! single-spin-flip Metropolis dynamics, partition functions in the log
//! domain (full, energy-constrained and on sub-cubes), occupation numbers of
//! energy intervals, per-instance checks of high-probability static bounds,
//! trajectory simulation and spectral-gap sweeps.

pub mod dynamics;
pub mod error;
pub mod gap;
pub mod instance;
pub mod occupation;
pub mod params;
pub mod partition;
pub mod simulate;
pub mod statics;

pub use dynamics::{
    conductance_closed_form, gibbs_measure, lambda_weights, metropolis_chain, metropolis_rate, LambdaWeights,
    DEFAULT_CAP,
};
pub use error::{RemError, Result};
pub use gap::{rem_gap_sweep, GapRecord, GapSweepReport};
pub use instance::{beta_c, disorder_rng, sample_instance, RemInstance};
pub use occupation::{occupation_profile, occupation_profile_subcube, OccupationProfile};
pub use params::{closed_form_bounds, ClosedFormBounds, ParameterChoice, ParameterMode};
pub use partition::{log_partition, subcube_partition, Constraint, FixedSpins, LogPartition};
pub use simulate::{exit_rate, simulate_trajectory, Trajectory};
pub use statics::{static_bounds_check, StaticBoundsReport};
