//! Good and bad configurations by energy threshold.

use serde::{Deserialize, Serialize};

use crate::error::{PathsError, Result};

/// Which threshold defines a good point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdVariant {
    /// `H(z) <= sqrt((1 + c_e) N ln N)`.
    #[default]
    Narrow,
    /// `H(z) <= sqrt((1 + c_e) 2 N ln N)`.
    Wide,
}

impl ThresholdVariant {
    pub fn threshold(self, n: usize, c_e: f64) -> f64 {
        let nf = n as f64;
        let factor = match self {
            ThresholdVariant::Narrow => 1.0,
            ThresholdVariant::Wide => 2.0,
        };
        ((1.0 + c_e) * factor * nf * nf.ln()).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoodBadClassification {
    pub n: usize,
    pub c_e: f64,
    pub variant: ThresholdVariant,
    pub threshold: f64,
    /// `good[z]` iff `H(z) <= threshold`.
    pub good: Vec<bool>,
}

impl GoodBadClassification {
    pub fn is_good(&self, z: u32) -> bool {
        self.good[z as usize]
    }

    pub fn bad_count(&self) -> usize {
        self.good.iter().filter(|g| !**g).count()
    }

    pub fn bad_set(&self) -> Vec<bool> {
        self.good.iter().map(|g| !g).collect()
    }
}

/// Classifies every configuration of an `n`-spin energy table.
pub fn classify(h: &[f64], n: usize, c_e: f64, variant: ThresholdVariant) -> Result<GoodBadClassification> {
    if n == 0 || n > 31 || h.len() != 1usize << n {
        return Err(PathsError::InvalidArgument(format!("energy table of length {} for N = {n}", h.len())));
    }
    if !(c_e > 0.0) {
        return Err(PathsError::InvalidArgument(format!("c_e = {c_e} must be positive")));
    }
    let threshold = variant.threshold(n, c_e);
    Ok(GoodBadClassification { n, c_e, variant, threshold, good: h.iter().map(|&e| e <= threshold).collect() })
}
