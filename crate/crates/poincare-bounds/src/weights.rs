//! Positive per-state weights for weighted path bounds.

use serde::{Deserialize, Serialize};

use crate::error::{BoundError, Result};

/// Weights `lambda(x)` on path starts and `mu(y)` on path ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightAssignment {
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
}

impl WeightAssignment {
    pub fn new(lambda: Vec<f64>, mu: Vec<f64>) -> Result<Self> {
        if lambda.len() != mu.len() {
            return Err(BoundError::InvalidArgument("lambda and mu lengths differ".into()));
        }
        for (i, w) in lambda.iter().chain(&mu).enumerate() {
            if !(*w > 0.0 && w.is_finite()) {
                return Err(BoundError::NonPositiveInput(format!("weight {i} = {w}")));
            }
        }
        Ok(Self { lambda, mu })
    }

    pub fn unit(n: usize) -> Self {
        Self { lambda: vec![1.0; n], mu: vec![1.0; n] }
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.lambda.iter().chain(&self.mu).all(|w| *w == 1.0)
    }
}
