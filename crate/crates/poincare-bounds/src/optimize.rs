//! Multistart coordinate descent on a constant's defining ratio.
//!
//! Each iterate is recentered under `pi` and scaled to `||f||_inf = 1`, which
//! leaves every ratio unchanged. The result is the best ratio found and is
//! therefore an upper bound on the infimum.

use chain_core::{spectral_gap, ProbabilityVector, ReversibleChain};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{constant_ratio, normalize, Family};
use crate::error::Result;

/// Search effort.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub starts: usize,
    pub max_sweeps: usize,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self { starts: 8, max_sweeps: 200, seed: 0 }
    }
}

/// Best test-function evidence for one constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalConstantEstimate {
    pub family: Family,
    pub p: f64,
    pub eta: Option<Vec<f64>>,
    /// Smallest ratio found; an upper bound on the constant.
    pub upper_bound: f64,
    /// Optional geometric lower bound on the constant.
    pub lower_bound: Option<f64>,
    /// Test function attaining `upper_bound`, with `||f||_inf = 1`.
    pub witness: Vec<f64>,
}

fn ratio_or_inf(chain: &ReversibleChain, family: Family, p: f64, f: &[f64], eta: Option<&ProbabilityVector>) -> f64 {
    constant_ratio(chain, family, p, f, eta).unwrap_or(f64::INFINITY)
}

fn descend(
    chain: &ReversibleChain,
    family: Family,
    p: f64,
    eta: Option<&ProbabilityVector>,
    mut f: Vec<f64>,
    max_sweeps: usize,
) -> (f64, Vec<f64>) {
    let pi = chain.pi();
    if normalize(&mut f, pi).is_none() {
        return (f64::INFINITY, f);
    }
    let mut best = ratio_or_inf(chain, family, p, &f, eta);
    let mut step = 0.5;
    let mut cand = f.clone();
    for _ in 0..max_sweeps {
        let mut improved = false;
        for x in 0..f.len() {
            for dir in [1.0, -1.0] {
                cand.copy_from_slice(&f);
                cand[x] += dir * step;
                if normalize(&mut cand, pi).is_none() {
                    continue;
                }
                let r = ratio_or_inf(chain, family, p, &cand, eta);
                if r < best {
                    best = r;
                    f.copy_from_slice(&cand);
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < 1e-9 {
                break;
            }
        }
    }
    (best, f)
}

/// Multistart minimization of the ratio; deterministic for a given budget.
///
/// Starts: the gap eigenfunction, centered indicators of single states, then
/// Gaussian vectors from per-start seeds. Ties resolve to the earliest start.
pub fn minimize_constant(
    chain: &ReversibleChain,
    family: Family,
    p: f64,
    eta: Option<&ProbabilityVector>,
    budget: &Budget,
) -> Result<FunctionalConstantEstimate> {
    let n = chain.n();
    // Surface argument errors before searching.
    let mut probe: Vec<f64> = (0..n).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect();
    normalize(&mut probe, chain.pi());
    match constant_ratio(chain, family, p, &probe, eta) {
        Err(crate::error::BoundError::ZeroDenominator) | Ok(_) => {}
        Err(e) => return Err(e),
    }

    let mut starts: Vec<Vec<f64>> = Vec::new();
    if n <= chain_core::spectral::DENSE_GAP_LIMIT {
        starts.push(spectral_gap(chain)?.eigenfunction);
    }
    for x in 0..n.min(budget.starts) {
        starts.push((0..n).map(|i| if i == x { 1.0 } else { 0.0 }).collect());
    }
    for s in 0..budget.starts {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(s as u64));
        starts.push((0..n).map(|_| StandardNormal.sample(&mut rng)).collect());
    }
    let results: Vec<(f64, Vec<f64>)> =
        starts.into_par_iter().map(|f| descend(chain, family, p, eta, f, budget.max_sweeps)).collect();
    let (upper_bound, witness) = results
        .into_iter()
        .fold((f64::INFINITY, Vec::new()), |acc, r| if r.0 < acc.0 { r } else { acc });
    Ok(FunctionalConstantEstimate {
        family,
        p,
        eta: eta.map(|e| e.as_slice().to_vec()),
        upper_bound,
        lower_bound: None,
        witness,
    })
}
