//! Finite reversible continuous-time Markov chains.
//!
//! A [`ReversibleChain`] holds jump rates `K(x,y)` and a strictly positive
//! stationary law `pi` with `pi(x) K(x,y) = pi(y) K(y,x)`. On top of it the
//! crate computes the Dirichlet form, the semigroup `P_t` by uniformization,
//! the spectral gap, total-variation distances and certified brackets of the
//! initial-law-dependent distance `d_eta(t)` and mixing time `T_eta(eps)`.

pub mod chain;
pub mod envelope;
pub mod error;
pub mod generate;
pub mod io;
pub mod mixing;
pub mod prob;
pub mod semigroup;
pub mod spectral;
pub mod tv;

pub use chain::{Rate, ReversibleChain};
pub use envelope::{d_eta_envelope, geometric_grid, DecayEnvelope, EnvelopeEngine, EnvelopePoint};
pub use error::{ChainError, Result};
pub use io::{ChainFile, EdgeRecord};
pub use mixing::{t_eta, t_eta_with, TEtaBracket, TEtaOptions};
pub use prob::ProbabilityVector;
pub use semigroup::{evolve_distribution, semigroup_apply};
pub use spectral::{spectral_gap, GapEstimate, GapMethod, Spectrum};
pub use tv::tv_distance;
