//! Concentration diagnostic for the first nontrivial eigenfunction.

use chain_core::{spectral_gap, ReversibleChain};
use serde::{Deserialize, Serialize};

use crate::constants::{constant_ratio, Family};
use crate::error::{BoundError, Result};
use crate::optimize::{minimize_constant, Budget};

/// Relative slack on the checked inequality.
pub const CONCENTRATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub p: f64,
    pub p_prime: f64,
    /// First nontrivial eigenvalue `l`.
    pub eigenvalue: f64,
    /// `pi(|phi|)` with `pi(phi^2) = 1`.
    pub pi_abs_phi: f64,
    /// `K2(p)` ratio at `phi`.
    pub k2_ratio: f64,
    /// `l / pi(|phi|)^{(p+1)/p}`.
    pub k2_bound: f64,
    /// Best test-function value of `L(p)`; at least `l`.
    pub l_upper: f64,
    /// `(l / l_upper)^{p'/(1+p')}`, a lower estimate of `(l / L(p))^{p'/(1+p')}`.
    pub ratio_power: f64,
    /// `K2(p) <= l / pi(|phi|)^{(p+1)/p}` and `pi(|phi|) <= 1`.
    pub holds: bool,
}

pub fn eigenvector_concentration(chain: &ReversibleChain, p: f64, p_prime: f64) -> Result<ConcentrationReport> {
    if !(p > 0.0 && p <= 1.0 && p_prime > 0.0 && p_prime < p) {
        return Err(BoundError::InvalidArgument(format!("need 0 < p' < p <= 1, got p = {p}, p' = {p_prime}")));
    }
    let est = spectral_gap(chain)?;
    let pi = chain.pi();
    let norm: f64 = est.eigenfunction.iter().zip(pi).map(|(a, w)| a * a * w).sum::<f64>().sqrt();
    let phi: Vec<f64> = est.eigenfunction.iter().map(|a| a / norm).collect();
    let pi_abs_phi: f64 = phi.iter().zip(pi).map(|(a, w)| a.abs() * w).sum();
    let k2_ratio = constant_ratio(chain, Family::K2, p, &phi, None)?;
    let k2_bound = est.gap / pi_abs_phi.powf((p + 1.0) / p);
    let l_upper = minimize_constant(chain, Family::L, p, None, &Budget::default())?.upper_bound.max(est.gap);
    let holds = k2_ratio <= k2_bound * (1.0 + CONCENTRATION_TOLERANCE) && pi_abs_phi <= 1.0 + CONCENTRATION_TOLERANCE;
    Ok(ConcentrationReport {
        p,
        p_prime,
        eigenvalue: est.gap,
        pi_abs_phi,
        k2_ratio,
        k2_bound,
        l_upper,
        ratio_power: (est.gap / l_upper).powf(p_prime / (1.0 + p_prime)),
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use chain_core::Rate;

    #[test]
    fn two_state_eigenfunction_is_flat_in_modulus() {
        let c = ReversibleChain::new(vec![0.5, 0.5], [Rate { x: 0, y: 1, rate: 1.0 }, Rate { x: 1, y: 0, rate: 1.0 }])
            .unwrap();
        let r = eigenvector_concentration(&c, 1.0, 0.5).unwrap();
        assert!((r.pi_abs_phi - 1.0).abs() < 1e-12);
        assert!((r.eigenvalue - 2.0).abs() < 1e-12);
        assert!(r.holds);
    }

    #[test]
    fn requires_p_prime_below_p() {
        let c = ReversibleChain::new(vec![0.5, 0.5], [Rate { x: 0, y: 1, rate: 1.0 }, Rate { x: 1, y: 0, rate: 1.0 }])
            .unwrap();
        assert!(eigenvector_concentration(&c, 0.5, 0.5).is_err());
    }
}
