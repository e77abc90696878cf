//! Path families on the hypercube `{-1,+1}^N`.
//!
//! Cyclic-flip paths join two configurations by flipping their disagreeing
//! spins in cyclic order from a start site. Given an energy table, points are
//! good or bad by an energy threshold, and [`select_paths`] picks one path per
//! ordered pair whose interior avoids bad points when it can.

pub mod certificate;
pub mod classify;
pub mod error;
pub mod hypercube;
pub mod select;

pub use certificate::{good_path_certificate, GoodPathCertificate};
pub use classify::{classify, GoodBadClassification, ThresholdVariant};
pub use error::{PathsError, Result};
pub use hypercube::{cyclic_flip_path, hamming, interior_disjointness_check, HypercubePath};
pub use select::{select_paths, PathFamily, PathKind, MAX_FAMILY_N};
