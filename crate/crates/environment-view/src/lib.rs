//! The environment seen from the particle.
//!
//! For Metropolis dynamics `X_t` of the Random Energy Model, the environment
//! process is `omega_t = X_t . H`, the energy table translated by the current
//! position. The crate provides the group action, laws on the orbit of `H`,
//! exact checks of the shift identity, the Markov property and invariance
//! and reversibility of `nu`, disorder averages over starting points, and the
//! averaged mixing time `T_av`.

pub mod error;
pub mod functional;
pub mod group;
pub mod law;
pub mod identities;
pub mod process;
pub mod t_av;

pub use error::{EnvError, Result};
pub use functional::{evaluation_basis, random_cosines, TestFunctional};
pub use group::{act, SpinGroupElement, Translated};
pub use law::{energy_digest, nu_measure, stabilizer, EnvironmentLaw};
pub use identities::{
    invariance_reversibility_check, shift_identity_check, sigma_independence, InvarianceReport, ShiftIdentityReport,
    SigmaIndependenceReport, StartAverages, EXACT_TOLERANCE,
};
pub use process::EnvironmentProcess;
pub use t_av::{t_av_estimate, SeedEnvelope, TAvOptions, TAvReport, MIN_SEEDS};
