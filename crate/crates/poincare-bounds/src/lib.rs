//! Functional constants of reversible chains and the bounds built on them.
//!
//! Test functions give upper bounds on the constants `L(p)`, `L_eta(p)`,
//! `K(p)`, `Lambda(p)` and `K2(p)`; canonical-path arguments give lower
//! bounds. The decay and mixing-time bounds consume only the lower bounds.

pub mod concentration;
pub mod constants;
pub mod decay;
pub mod error;
pub mod geometric;
pub mod optimize;
pub mod paths;
pub mod report;
pub mod weights;

pub use concentration::{eigenvector_concentration, ConcentrationReport};
pub use constants::{constant_ratio, normalize, Family};
pub use decay::{decay_bound, mixing_time_bound, step1_bound};
pub use error::{BoundError, Result};
pub use geometric::{good_bad_bound, good_bad_weights, path_bound_gap, path_bound_l_eta, Partition};
pub use optimize::{minimize_constant, Budget, FunctionalConstantEstimate};
pub use paths::{ExplicitPaths, PathRecord, PathSystem, PathsFile};
pub use report::BoundReport;
pub use weights::WeightAssignment;
