//! Total-variation distance.

use crate::error::{ChainError, Result};

/// `(1/2) sum_x |mu(x) - nu(x)|`.
pub fn tv_distance(mu: &[f64], nu: &[f64]) -> Result<f64> {
    if mu.len() != nu.len() {
        return Err(ChainError::DimensionMismatch { expected: mu.len(), got: nu.len() });
    }
    Ok(0.5 * mu.iter().zip(nu).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_laws_are_at_distance_zero() {
        let mu = [0.2, 0.3, 0.5];
        assert_eq!(tv_distance(&mu, &mu).unwrap(), 0.0);
    }

    #[test]
    fn disjoint_supports_are_at_distance_one() {
        assert_eq!(tv_distance(&[0.5, 0.5, 0.0, 0.0], &[0.0, 0.0, 0.3, 0.7]).unwrap(), 1.0);
    }

    #[test]
    fn point_mass_against_uniform() {
        for n in 2..20 {
            let mut delta = vec![0.0; n];
            delta[n / 2] = 1.0;
            let u = vec![1.0 / n as f64; n];
            let expected = 1.0 - 1.0 / n as f64;
            assert!((tv_distance(&delta, &u).unwrap() - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(tv_distance(&[1.0], &[0.5, 0.5]).is_err());
    }
}
