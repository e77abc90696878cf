//! Exact checks of the shift identity, the Markov property of `omega_t`,
//! invariance and reversibility of `nu`, and the disorder-averaged
//! independence of the starting point.

use rayon::prelude::*;
use rem_model::{sample_instance, RemInstance};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::functional::TestFunctional;
use crate::group::{SpinGroupElement, Translated};
use crate::law::nu_measure;
use crate::process::EnvironmentProcess;

/// Absolute tolerance of the exact identities.
pub const EXACT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftIdentityReport {
    pub n: usize,
    pub sigma: SpinGroupElement,
    pub t: f64,
    pub t1: f64,
    pub t2: f64,
    pub functionals: usize,
    /// `max_phi |e^H_sigma[phi(omega_t)] - e^{sigma.H}_1[phi(omega_t)]|`.
    pub single_time_discrepancy: f64,
    /// The same for products `phi1(omega_t1) phi2(omega_t2)`.
    pub two_time_discrepancy: f64,
    /// `max |e^H_sigma[phi1(omega_t1) phi2(omega_t2)] - e^{sigma.H}_1[phi1(omega_t1) e^{omega_t1}_1[phi2(omega_{t2-t1})]]|`.
    pub markov_discrepancy: f64,
    pub tolerance: f64,
    pub holds: bool,
}

/// Compares the process started at `sigma` with the one for `sigma . H` started at the identity.
pub fn shift_identity_check(
    inst: &RemInstance,
    sigma: SpinGroupElement,
    t: f64,
    (t1, t2): (f64, f64),
    functionals: &[TestFunctional],
    cap: usize,
) -> Result<ShiftIdentityReport> {
    let base = EnvironmentProcess::new(inst.clone(), cap)?;
    let shifted = base.translated(sigma, cap)?;
    let mut single = 0.0f64;
    for phi in functionals {
        let lhs = base.one_time(sigma.0, t, phi)?;
        let rhs = shifted.one_time(0, t, phi)?;
        single = single.max((lhs - rhs).abs());
    }

    // Inner expectations from each environment reachable at time t1, each with its own chain.
    let size = 1u32 << inst.n;
    let inner: Vec<Vec<f64>> = (0..size)
        .map(|x1| {
            let env = shifted.translated(SpinGroupElement(x1), cap)?;
            functionals.iter().map(|phi| env.one_time(0, t2 - t1, phi)).collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let mut law = vec![0.0; size as usize];
    law[0] = 1.0;
    let law_t1 = chain_core::evolve_distribution(&shifted.chain, &law, t1)?;

    let mut two = 0.0f64;
    let mut markov = 0.0f64;
    for phi1 in functionals {
        let first = phi1.pullback(&shifted.inst.energies);
        for (b, phi2) in functionals.iter().enumerate() {
            let lhs = base.two_time(sigma.0, t1, t2, phi1, phi2)?;
            let rhs = shifted.two_time(0, t1, t2, phi1, phi2)?;
            two = two.max((lhs - rhs).abs());
            let factored: f64 =
                (0..size as usize).map(|x1| law_t1[x1] * first[x1] * inner[x1][b]).sum();
            markov = markov.max((lhs - factored).abs());
        }
    }
    let holds = single <= EXACT_TOLERANCE && two <= EXACT_TOLERANCE && markov <= EXACT_TOLERANCE;
    Ok(ShiftIdentityReport {
        n: inst.n,
        sigma,
        t,
        t1,
        t2,
        functionals: functionals.len(),
        single_time_discrepancy: single,
        two_time_discrepancy: two,
        markov_discrepancy: markov,
        tolerance: EXACT_TOLERANCE,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub n: usize,
    pub t: f64,
    pub functionals: usize,
    pub support_size: usize,
    /// `max_phi |sum_{H'} nu(H') e^{H'}_1[phi(omega_t)] - nu(phi)|`.
    pub invariance_discrepancy: f64,
    /// `max_{phi,psi} |nu(phi e^._1[psi(omega_t)]) - nu(psi e^._1[phi(omega_t)])|`.
    pub reversibility_discrepancy: f64,
    pub tolerance: f64,
    pub holds: bool,
}

/// Invariance and reversibility of `nu` for `omega_t`, each support point run with its own chain.
pub fn invariance_reversibility_check(
    inst: &RemInstance,
    t: f64,
    functionals: &[TestFunctional],
    cap: usize,
) -> Result<InvarianceReport> {
    let nu = nu_measure(inst)?;
    let base = EnvironmentProcess::new(inst.clone(), cap)?;
    let h = &inst.energies;
    let mut evolved = Vec::with_capacity(nu.support.len());
    let mut at_zero = Vec::with_capacity(nu.support.len());
    for &s in &nu.support {
        let env = base.translated(s, cap)?;
        evolved.push(functionals.iter().map(|phi| env.one_time(0, t, phi)).collect::<Result<Vec<f64>>>()?);
        at_zero.push(functionals.iter().map(|phi| phi.eval(&Translated { base: h, sigma: s })).collect::<Vec<f64>>());
    }
    let mut invariance = 0.0f64;
    for (a, phi) in functionals.iter().enumerate() {
        let lhs: f64 = nu.weights.iter().zip(&evolved).map(|(w, e)| w * e[a]).sum();
        invariance = invariance.max((lhs - nu.integrate(h, phi)).abs());
    }
    let mut reversibility = 0.0f64;
    for a in 0..functionals.len() {
        for b in a + 1..functionals.len() {
            let ab: f64 = (0..nu.support.len()).map(|k| nu.weights[k] * at_zero[k][a] * evolved[k][b]).sum();
            let ba: f64 = (0..nu.support.len()).map(|k| nu.weights[k] * at_zero[k][b] * evolved[k][a]).sum();
            reversibility = reversibility.max((ab - ba).abs());
        }
    }
    Ok(InvarianceReport {
        n: inst.n,
        t,
        functionals: functionals.len(),
        support_size: nu.support.len(),
        invariance_discrepancy: invariance,
        reversibility_discrepancy: reversibility,
        tolerance: EXACT_TOLERANCE,
        holds: invariance <= EXACT_TOLERANCE && reversibility <= EXACT_TOLERANCE,
    })
}

/// Disorder averages of `e^H_sigma[phi(omega_t)]` for one functional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartAverages {
    pub functional: usize,
    /// Indexed by the starting configuration.
    pub means: Vec<f64>,
    /// Half-widths of normal 95% intervals.
    pub half_widths: Vec<f64>,
    /// `max_sigma (mean - hw) <= min_sigma (mean + hw)`, so every pair of intervals overlaps.
    pub overlap: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaIndependenceReport {
    pub n: usize,
    pub beta: f64,
    pub t: f64,
    pub seeds: usize,
    pub entries: Vec<StartAverages>,
    pub all_overlap: bool,
}

/// Monte Carlo over disorder seeds of the start-dependence of `e^H_sigma[phi(omega_t)]`.
pub fn sigma_independence(
    n: usize,
    beta: f64,
    seeds: &[u64],
    t: f64,
    functionals: &[TestFunctional],
    cap: usize,
) -> Result<SigmaIndependenceReport> {
    let per_seed: Vec<Vec<Vec<f64>>> = seeds
        .par_iter()
        .map(|&seed| {
            let proc = EnvironmentProcess::new(sample_instance(n, beta, seed)?, cap)?;
            functionals.iter().map(|phi| proc.one_time_all(t, phi)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let count = seeds.len() as f64;
    let size = 1usize << n;
    let entries: Vec<StartAverages> = (0..functionals.len())
        .map(|a| {
            let mut means = vec![0.0; size];
            let mut half_widths = vec![0.0; size];
            for s in 0..size {
                let mean = per_seed.iter().map(|v| v[a][s]).sum::<f64>() / count;
                let var = per_seed.iter().map(|v| (v[a][s] - mean).powi(2)).sum::<f64>() / (count - 1.0).max(1.0);
                means[s] = mean;
                half_widths[s] = 1.96 * (var / count).sqrt();
            }
            let lo = means.iter().zip(&half_widths).map(|(m, h)| m - h).fold(f64::NEG_INFINITY, f64::max);
            let hi = means.iter().zip(&half_widths).map(|(m, h)| m + h).fold(f64::INFINITY, f64::min);
            StartAverages { functional: a, means, half_widths, overlap: lo <= hi }
        })
        .collect();
    let all_overlap = entries.iter().all(|e| e.overlap);
    Ok(SigmaIndependenceReport { n, beta, t, seeds: seeds.len(), entries, all_overlap })
}
