//! Probability vectors over a finite state space.

use serde::{Deserialize, Serialize};

use crate::error::{ChainError, Result};

/// Absolute tolerance on the total mass of a probability vector.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbabilityVector {
    weights: Vec<f64>,
}

impl ProbabilityVector {
    /// Validates nonnegativity and unit mass within [`MASS_TOLERANCE`].
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(ChainError::InvalidProbability("empty vector".into()));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w >= 0.0)) {
            return Err(ChainError::InvalidProbability(format!("weight {i} = {w}")));
        }
        let mass: f64 = weights.iter().sum();
        if (mass - 1.0).abs() > MASS_TOLERANCE {
            return Err(ChainError::InvalidProbability(format!("total mass {mass}")));
        }
        Ok(Self { weights })
    }

    /// Rescales nonnegative weights to unit mass.
    pub fn normalized(mut weights: Vec<f64>) -> Result<Self> {
        let mass: f64 = weights.iter().sum();
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(ChainError::InvalidProbability(format!("total mass {mass}")));
        }
        weights.iter_mut().for_each(|w| *w /= mass);
        Self::new(weights)
    }

    pub fn uniform(n: usize) -> Self {
        Self { weights: vec![1.0 / n as f64; n] }
    }

    pub fn point_mass(n: usize, x: usize) -> Self {
        let mut weights = vec![0.0; n];
        weights[x] = 1.0;
        Self { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    /// Expectation of `f`.
    pub fn mean(&self, f: &[f64]) -> f64 {
        self.weights.iter().zip(f).map(|(w, v)| w * v).sum()
    }

    /// Expectation of `|f|`.
    pub fn mean_abs(&self, f: &[f64]) -> f64 {
        self.weights.iter().zip(f).map(|(w, v)| w * v.abs()).sum()
    }
}

impl TryFrom<Vec<f64>> for ProbabilityVector {
    type Error = ChainError;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ProbabilityVector> for Vec<f64> {
    fn from(p: ProbabilityVector) -> Self {
        p.weights
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_mass_and_negative_weights() {
        assert!(ProbabilityVector::new(vec![0.5, 0.4]).is_err());
        assert!(ProbabilityVector::new(vec![1.5, -0.5]).is_err());
        assert!(ProbabilityVector::new(vec![]).is_err());
        assert!(ProbabilityVector::new(vec![0.25; 4]).is_ok());
    }

    #[test]
    fn normalizes_and_averages() {
        let p = ProbabilityVector::normalized(vec![1.0, 3.0]).unwrap();
        assert_eq!(p.as_slice(), &[0.25, 0.75]);
        assert!((p.mean(&[4.0, -4.0]) + 2.0).abs() < 1e-15);
        assert!((p.mean_abs(&[4.0, -4.0]) - 4.0).abs() < 1e-15);
    }
}
