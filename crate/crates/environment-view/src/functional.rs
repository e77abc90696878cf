//! Test functionals of the environment.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::group::Translated;

/// A real function of an energy table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestFunctional {
    /// `h -> h(at)`.
    Evaluation { at: u32 },
    /// `h -> h(at)^2`.
    Square { at: u32 },
    /// `h -> cos(sum_x a_x h(x))`.
    Cosine { coefficients: Vec<f64> },
}

impl TestFunctional {
    pub fn eval(&self, omega: &Translated) -> f64 {
        match self {
            TestFunctional::Evaluation { at } => omega.get(*at),
            TestFunctional::Square { at } => omega.get(*at).powi(2),
            TestFunctional::Cosine { coefficients } => {
                coefficients.iter().enumerate().map(|(x, a)| a * omega.get(x as u32)).sum::<f64>().cos()
            }
        }
    }

    /// `sigma -> phi(sigma . h)`.
    pub fn pullback(&self, h: &[f64]) -> Vec<f64> {
        (0..h.len() as u32)
            .map(|s| self.eval(&Translated { base: h, sigma: crate::group::SpinGroupElement(s) }))
            .collect()
    }
}

/// Evaluations at every configuration.
pub fn evaluation_basis(n: usize) -> Vec<TestFunctional> {
    (0..1u32 << n).map(|at| TestFunctional::Evaluation { at }).collect()
}

/// Bounded functionals with coefficients uniform in `[-1, 1] / sqrt(N)`.
pub fn random_cosines<R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> Vec<TestFunctional> {
    let scale = 1.0 / (n as f64).sqrt();
    (0..count)
        .map(|_| TestFunctional::Cosine {
            coefficients: (0..1usize << n).map(|_| rng.random_range(-1.0..=1.0) * scale).collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::SpinGroupElement;

    #[test]
    fn evaluation_reads_the_translated_table() {
        let h = [1.0, 2.0, 3.0, 4.0];
        let omega = Translated { base: &h, sigma: SpinGroupElement(3) };
        assert_eq!(TestFunctional::Evaluation { at: 0 }.eval(&omega), 4.0);
        assert_eq!(TestFunctional::Square { at: 1 }.eval(&omega), 9.0);
        assert_eq!(TestFunctional::Evaluation { at: 0 }.pullback(&h), h.to_vec());
    }
}
