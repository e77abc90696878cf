//! Exact expectations for `omega_t = X_t . H` at small `N`.

use chain_core::{evolve_distribution, semigroup_apply, ReversibleChain};
use rem_model::{metropolis_chain, RemInstance};

use crate::error::{EnvError, Result};
use crate::functional::TestFunctional;
use crate::group::{act, SpinGroupElement};

/// Metropolis dynamics for one energy table, viewed through the environment.
#[derive(Debug, Clone)]
pub struct EnvironmentProcess {
    pub inst: RemInstance,
    pub chain: ReversibleChain,
}

impl EnvironmentProcess {
    pub fn new(inst: RemInstance, cap: usize) -> Result<Self> {
        if inst.n > cap {
            return Err(EnvError::CapExceeded { n: inst.n, cap });
        }
        let chain = metropolis_chain(&inst, cap)?;
        Ok(Self { inst, chain })
    }

    /// The process for `sigma . H` at the same temperature.
    pub fn translated(&self, sigma: SpinGroupElement, cap: usize) -> Result<Self> {
        let h = act(sigma, &self.inst.energies, self.inst.n)?;
        Self::new(RemInstance::from_energies(self.inst.n, self.inst.beta, h)?, cap)
    }

    fn law_at(&self, start: u32, t: f64) -> Result<Vec<f64>> {
        let mut mu = vec![0.0; self.chain.n()];
        mu[start as usize] = 1.0;
        Ok(evolve_distribution(&self.chain, &mu, t)?)
    }

    /// `e^H_start[phi(omega_t)]`, from the law of `X_t`.
    pub fn one_time(&self, start: u32, t: f64, phi: &TestFunctional) -> Result<f64> {
        let law = self.law_at(start, t)?;
        let f = phi.pullback(&self.inst.energies);
        Ok(law.iter().zip(&f).map(|(p, v)| p * v).sum())
    }

    /// `sigma -> e^H_sigma[phi(omega_t)] = (P_t phi^H)(sigma)`.
    pub fn one_time_all(&self, t: f64, phi: &TestFunctional) -> Result<Vec<f64>> {
        Ok(semigroup_apply(&self.chain, &phi.pullback(&self.inst.energies), t)?)
    }

    /// `e^H_start[phi1(omega_t1) phi2(omega_t2)]` for `0 <= t1 <= t2`.
    pub fn two_time(&self, start: u32, t1: f64, t2: f64, phi1: &TestFunctional, phi2: &TestFunctional) -> Result<f64> {
        if !(0.0 <= t1 && t1 <= t2) {
            return Err(EnvError::InvalidArgument(format!("need 0 <= t1 <= t2; got {t1}, {t2}")));
        }
        let later = semigroup_apply(&self.chain, &phi2.pullback(&self.inst.energies), t2 - t1)?;
        let first = phi1.pullback(&self.inst.energies);
        let law = self.law_at(start, t1)?;
        Ok(law.iter().zip(first.iter().zip(&later)).map(|(p, (a, b))| p * a * b).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_zero_reads_the_start() {
        let inst = rem_model::sample_instance(3, 1.0, 1).unwrap();
        let h = inst.energies.clone();
        let proc = EnvironmentProcess::new(inst, 8).unwrap();
        let phi = TestFunctional::Evaluation { at: 0 };
        for s in 0..8u32 {
            assert!((proc.one_time(s, 0.0, &phi).unwrap() - h[s as usize]).abs() < 1e-14);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let inst = rem_model::sample_instance(5, 1.0, 1).unwrap();
        assert!(matches!(EnvironmentProcess::new(inst, 4), Err(EnvError::CapExceeded { .. })));
    }
}
