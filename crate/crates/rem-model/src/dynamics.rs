//! Gibbs measure, Metropolis chain and path-bound weights.

use chain_core::{ProbabilityVector, Rate, ReversibleChain};
use poincare_bounds::WeightAssignment;
use serde::{Deserialize, Serialize};

use crate::error::{RemError, Result};
use crate::instance::RemInstance;
use crate::partition::{log_partition, Constraint};

/// Default largest `N` for an explicit chain.
pub const DEFAULT_CAP: usize = 14;

/// `pi(sigma) = e^{-beta H(sigma)} / Z`, computed with a max shift.
pub fn gibbs_measure(inst: &RemInstance) -> ProbabilityVector {
    let log_z = log_partition(inst, Constraint::None).log_value;
    let w = inst.energies.iter().map(|&h| (-inst.beta * h - log_z).exp()).collect();
    ProbabilityVector::normalized(w).expect("Gibbs weights are positive")
}

/// Metropolis rate `(1/N) e^{-beta (H(to) - H(from))^+}` between neighbors.
pub fn metropolis_rate(inst: &RemInstance, from: u32, to: u32) -> f64 {
    let dh = inst.energies[to as usize] - inst.energies[from as usize];
    (-inst.beta * dh.max(0.0)).exp() / inst.n as f64
}

/// Single-spin-flip Metropolis chain, reversible for the Gibbs measure.
pub fn metropolis_chain(inst: &RemInstance, cap: usize) -> Result<ReversibleChain> {
    if inst.n > cap {
        return Err(RemError::CapExceeded { n: inst.n, cap });
    }
    let n = inst.n;
    let pi = gibbs_measure(inst);
    let rates = (0..1u32 << n).flat_map(move |x| {
        (0..n).map(move |s| {
            let y = x ^ (1 << s);
            Rate { x: x as usize, y: y as usize, rate: metropolis_rate(inst, x, y) }
        })
    });
    Ok(ReversibleChain::new(pi.as_slice().to_vec(), rates)?)
}

/// `Q(x,y) = e^{-beta max(H(x), H(y))} / (N Z)` for neighbors.
pub fn conductance_closed_form(inst: &RemInstance, x: u32, y: u32, log_z: f64) -> f64 {
    let hmax = inst.energies[x as usize].max(inst.energies[y as usize]);
    (-inst.beta * hmax - log_z).exp() / inst.n as f64
}

/// Weights that are 1 where `H >= -dN` and `Z(beta, <= -d)^rho` below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaWeights {
    pub d: f64,
    pub rho: f64,
    /// `rho ln Z(beta, <= -d)`, or 0 when no state lies below `-dN`.
    pub log_lambda: f64,
    pub deep_states: usize,
    /// No state lies below `-dN`; all weights are 1.
    pub empty_low_set: bool,
    pub lambda: Vec<f64>,
}

impl LambdaWeights {
    /// `mu = lambda`, for the bound on `L_pi`.
    pub fn for_gibbs(&self) -> WeightAssignment {
        WeightAssignment::new(self.lambda.clone(), self.lambda.clone()).expect("positive weights")
    }

    /// `mu = 1`, for the bound on `L_eta` with `eta` uniform.
    pub fn for_uniform(&self) -> WeightAssignment {
        WeightAssignment::new(self.lambda.clone(), vec![1.0; self.lambda.len()]).expect("positive weights")
    }
}

pub fn lambda_weights(inst: &RemInstance, d: f64, rho: f64) -> Result<LambdaWeights> {
    if !(d > 0.0) || !(rho > 0.0 && rho < 1.0) {
        return Err(RemError::InvalidArgument(format!("need d > 0 and 0 < rho < 1, got d = {d}, rho = {rho}")));
    }
    let low = Constraint::AtMost { d };
    let z_low = log_partition(inst, low);
    let log_lambda = if z_low.is_empty { 0.0 } else { rho * z_low.log_value };
    let value = log_lambda.exp();
    if !(value > 0.0 && value.is_finite()) {
        return Err(RemError::InvalidArgument(format!("lambda = e^{log_lambda} is not representable")));
    }
    let lambda: Vec<f64> = inst.energies.iter().map(|&h| if low.admits(h, inst.n) { value } else { 1.0 }).collect();
    let deep_states = inst.energies.iter().filter(|&&h| low.admits(h, inst.n)).count();
    Ok(LambdaWeights { d, rho, log_lambda, deep_states, empty_low_set: z_low.is_empty, lambda })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::sample_instance;

    #[test]
    fn infinite_temperature_is_the_hypercube_walk() {
        let inst = sample_instance(5, 0.0, 1).unwrap();
        let pi = gibbs_measure(&inst);
        assert!(pi.as_slice().iter().all(|p| (p - 1.0 / 32.0).abs() < 1e-15));
        let chain = metropolis_chain(&inst, DEFAULT_CAP).unwrap();
        for (_, _, r) in chain.directed_edges() {
            assert_eq!(r, 0.2);
        }
    }

    #[test]
    fn rates_follow_the_energy_increment() {
        let inst = RemInstance::from_energies(2, 2.0, vec![0.0, 1.0, -1.0, 0.5]).unwrap();
        assert_eq!(metropolis_rate(&inst, 1, 0), 0.5);
        assert!((metropolis_rate(&inst, 0, 1) - 0.5 * (-2.0f64).exp()).abs() < 1e-16);
        let chain = metropolis_chain(&inst, DEFAULT_CAP).unwrap();
        assert_eq!(chain.rate(0, 3), 0.0);
        assert_eq!(chain.rate(1, 2), 0.0);
    }

    #[test]
    fn cap_is_enforced() {
        let inst = sample_instance(6, 1.0, 0).unwrap();
        assert_eq!(metropolis_chain(&inst, 5), Err(RemError::CapExceeded { n: 6, cap: 5 }));
    }

    #[test]
    fn closed_form_conductance() {
        let inst = sample_instance(7, 1.1, 9).unwrap();
        let chain = metropolis_chain(&inst, DEFAULT_CAP).unwrap();
        let log_z = log_partition(&inst, Constraint::None).log_value;
        for (x, y, _) in chain.directed_edges() {
            let a = chain.conductance(x, y);
            let b = conductance_closed_form(&inst, x as u32, y as u32, log_z);
            assert!((a - b).abs() <= 1e-12 * b);
        }
    }

    #[test]
    fn lambda_weight_cases() {
        let mut e = vec![0.0; 16];
        let w = lambda_weights(&RemInstance::from_energies(4, 1.0, e.clone()).unwrap(), 0.5, 0.75).unwrap();
        assert!(w.empty_low_set && w.lambda.iter().all(|&l| l == 1.0));
        e[3] = -3.0;
        let inst = RemInstance::from_energies(4, 1.0, e).unwrap();
        let w = lambda_weights(&inst, 0.5, 0.75).unwrap();
        assert_eq!(w.deep_states, 1);
        assert!((w.lambda[3] - (0.75f64 * 3.0).exp()).abs() < 1e-12);
        assert!(w.lambda.iter().all(|&l| l > 0.0));
    }
}
