//! Disorder realizations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{RemError, Result};

/// Static critical inverse temperature `sqrt(2 ln 2)`.
pub fn beta_c() -> f64 {
    (2.0 * std::f64::consts::LN_2).sqrt()
}

/// Largest `N` for which an energy table is sampled.
pub const MAX_N: usize = 26;

/// Energies `H(sigma)` for all `2^N` configurations.
///
/// Configuration index bit `s` is set when spin `s + 1` is `-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemInstance {
    pub n: usize,
    pub beta: f64,
    pub seed: u64,
    pub energies: Vec<f64>,
}

/// The generator for `(seed, N)`: ChaCha8 keyed by `seed` on stream `N`.
pub fn disorder_rng(seed: u64, n: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n as u64);
    rng
}

/// I.i.d. `N(0, N)` energies; energy `k` is the `k`-th draw of [`disorder_rng`].
pub fn sample_instance(n: usize, beta: f64, seed: u64) -> Result<RemInstance> {
    if n == 0 || n > MAX_N {
        return Err(RemError::InvalidArgument(format!("N = {n} outside 1..={MAX_N}")));
    }
    check_beta(beta)?;
    let mut rng = disorder_rng(seed, n);
    let normal = Normal::new(0.0, (n as f64).sqrt()).expect("positive variance");
    let energies = (0..1usize << n).map(|_| normal.sample(&mut rng)).collect();
    Ok(RemInstance { n, beta, seed, energies })
}

fn check_beta(beta: f64) -> Result<()> {
    if beta >= 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(RemError::InvalidArgument(format!("beta = {beta} must be finite and nonnegative")))
    }
}

impl RemInstance {
    /// Instance with a given energy table.
    pub fn from_energies(n: usize, beta: f64, energies: Vec<f64>) -> Result<Self> {
        if n == 0 || n > MAX_N || energies.len() != 1usize << n {
            return Err(RemError::InvalidArgument(format!("{} energies for N = {n}", energies.len())));
        }
        check_beta(beta)?;
        Ok(Self { n, beta, seed: 0, energies })
    }

    /// Same disorder at another temperature.
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(Self { beta, ..self.clone() })
    }

    pub fn num_configurations(&self) -> usize {
        self.energies.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regeneration_is_identical() {
        let a = sample_instance(8, 1.0, 42).unwrap();
        let b = sample_instance(8, 0.5, 42).unwrap();
        assert_eq!(a.energies, b.energies);
        assert_ne!(a.energies, sample_instance(8, 1.0, 43).unwrap().energies);
    }

    #[test]
    fn different_sizes_use_different_streams() {
        let a = sample_instance(4, 1.0, 7).unwrap();
        let b = sample_instance(5, 1.0, 7).unwrap();
        let scaled: Vec<f64> = b.energies[..16].iter().map(|e| e * (4.0f64 / 5.0).sqrt()).collect();
        assert_ne!(a.energies, scaled);
    }

    #[test]
    fn critical_temperature() {
        assert!((beta_c() * beta_c() - 2.0 * 2f64.ln()).abs() < 1e-15);
    }
}
