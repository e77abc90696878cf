//! Laws on the orbit `{sigma . H}` and the measure `nu(H') = sum_sigma pi(sigma) 1{H' = sigma . H}`.
//!
//! A translated table is represented by the acting group element. Elements
//! with `sigma . H = sigma' . H` differ by the stabilizer of `H`
//! (bit-level equality of energies), and their weights are merged onto the
//! smallest index of the coset.

use rem_model::{gibbs_measure, RemInstance};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{EnvError, Result};
use crate::functional::TestFunctional;
use crate::group::{SpinGroupElement, Translated};

/// Hex SHA-256 of the little-endian bit patterns of an energy table.
pub fn energy_digest(h: &[f64]) -> String {
    let mut hasher = Sha256::new();
    for e in h {
        hasher.update(e.to_bits().to_le_bytes());
    }
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Group elements `g` with `g . H = H`.
pub fn stabilizer(h: &[f64]) -> Vec<SpinGroupElement> {
    let size = h.len() as u32;
    (0..size)
        .filter(|&g| (0..size).all(|x| h[(x ^ g) as usize].to_bits() == h[x as usize].to_bits()))
        .map(SpinGroupElement)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentLaw {
    pub n: usize,
    pub base_digest: String,
    /// Coset representatives; the support point is `support[k] . H`.
    pub support: Vec<SpinGroupElement>,
    pub weights: Vec<f64>,
    /// Group elements merged into each support point.
    pub multiplicity: Vec<usize>,
}

impl EnvironmentLaw {
    /// Pushforward of a law on configurations under `sigma -> sigma . H`.
    pub fn pushforward(h: &[f64], n: usize, law: &[f64]) -> Result<Self> {
        if h.len() != 1usize << n || law.len() != h.len() {
            return Err(EnvError::DimensionMismatch { n, got: h.len().max(law.len()) });
        }
        let stab = stabilizer(h);
        let mut rep_of = vec![u32::MAX; h.len()];
        let mut support = Vec::new();
        let mut weights = Vec::new();
        let mut multiplicity = Vec::new();
        for s in 0..h.len() as u32 {
            if rep_of[s as usize] == u32::MAX {
                for g in &stab {
                    rep_of[(s ^ g.0) as usize] = support.len() as u32;
                }
                support.push(SpinGroupElement(s));
                weights.push(0.0);
                multiplicity.push(0);
            }
            let k = rep_of[s as usize] as usize;
            weights[k] += law[s as usize];
            multiplicity[k] += 1;
        }
        Ok(Self { n, base_digest: energy_digest(h), support, weights, multiplicity })
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `sum_k w_k phi(support_k . H)`; `h` must be the base table.
    pub fn integrate(&self, h: &[f64], phi: &TestFunctional) -> f64 {
        self.support.iter().zip(&self.weights).map(|(&s, w)| w * phi.eval(&Translated { base: h, sigma: s })).sum()
    }
}

/// `nu_beta^H`, the pushforward of the Gibbs measure.
pub fn nu_measure(inst: &RemInstance) -> Result<EnvironmentLaw> {
    EnvironmentLaw::pushforward(&inst.energies, inst.n, gibbs_measure(inst).as_slice())
}
