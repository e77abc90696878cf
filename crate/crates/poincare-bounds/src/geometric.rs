//! Canonical-path bounds.
//!
//! Edges are directed: a path from `x` to `y` uses `(u, v)` with conductance
//! `Q(u,v) = pi(u) K(u,v)`, and pairs run over ordered `(x, y)`, `x != y`.

use chain_core::{ProbabilityVector, ReversibleChain};
use serde::{Deserialize, Serialize};

use crate::error::{BoundError, Result};
use crate::paths::PathSystem;
use crate::report::BoundReport;
use crate::weights::WeightAssignment;

fn log_sum_exp(terms: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = terms.collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

/// Accumulates `sum_{(x,y): e in gamma(x,y)} weight(x,y)` per directed edge index.
fn edge_loads<P: PathSystem>(
    chain: &ReversibleChain,
    paths: &P,
    mut weight: impl FnMut(usize, usize) -> f64,
) -> Result<Vec<f64>> {
    let n = chain.n();
    if paths.num_states() != n {
        return Err(chain_core::ChainError::DimensionMismatch { expected: n, got: paths.num_states() }.into());
    }
    let mut load = vec![0.0; chain.num_directed_edges()];
    let mut bad_edge = None;
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let w = weight(x, y);
            let found = paths.for_each_edge(x, y, |u, v| match chain.edge_index(u, v) {
                Some(e) => load[e] += w,
                None => bad_edge = Some((u, v)),
            });
            if !found {
                return Err(BoundError::PathMissing { x, y });
            }
            if let Some((x, y)) = bad_edge {
                return Err(BoundError::ZeroConductanceEdge { x, y });
            }
        }
    }
    Ok(load)
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(BoundError::InvalidArgument(format!("p = {p} outside (0, 1]")))
    }
}

/// Weighted path bound on `1/L_eta(p)`:
/// `2^{2/p-1} (sum_x pi lambda^q  sum_y eta mu^q)^{2/q} sum_e W_e^2 / Q(e)`
/// with `q = p/(1-p)` and `W_e = sum_{e in gamma(x,y)} pi(x) eta(y) / (lambda(x) mu(y))`.
///
/// At `p = 1` the weight factor is its limit `(max lambda)^2 (max_{eta>0} mu)^2`,
/// giving `2 sum_e W_e^2 / Q(e)` for unit weights.
pub fn path_bound_l_eta<P: PathSystem>(
    chain: &ReversibleChain,
    paths: &P,
    weights: &WeightAssignment,
    p: f64,
    eta: &ProbabilityVector,
) -> Result<BoundReport> {
    check_p(p)?;
    let n = chain.n();
    if weights.len() != n || eta.len() != n {
        return Err(chain_core::ChainError::DimensionMismatch { expected: n, got: weights.len().min(eta.len()) }.into());
    }
    let pi = chain.pi();
    let et = eta.as_slice();
    let (lam, mu) = (&weights.lambda, &weights.mu);
    let load = edge_loads(chain, paths, |x, y| pi[x] * et[y] / (lam[x] * mu[y]))?;
    let sum: f64 = load.iter().enumerate().map(|(e, w)| w * w / chain.conductance_at(e)).sum();

    let support: Vec<usize> = (0..n).filter(|&y| et[y] > 0.0).collect();
    let log_weight_factor = if p == 1.0 {
        let lmax = lam.iter().copied().fold(0.0, f64::max);
        let mmax = support.iter().map(|&y| mu[y]).fold(0.0, f64::max);
        2.0 * (lmax.ln() + mmax.ln())
    } else {
        let q = p / (1.0 - p);
        let la = log_sum_exp((0..n).map(|x| pi[x].ln() + q * lam[x].ln()));
        let lb = log_sum_exp(support.iter().map(|&y| et[y].ln() + q * mu[y].ln()));
        (2.0 / q) * (la + lb)
    };
    let log_value = (2.0 / p - 1.0) * std::f64::consts::LN_2 + log_weight_factor + sum.ln();
    Ok(BoundReport::from_log("inverse_l_eta_path_bound", log_value)
        .with_param("p", p)
        .with_param("path_congestion", sum)
        .with_param("unit_weights", if weights.is_unit() { 1.0 } else { 0.0 }))
}

/// Path bound on `1/lambda`: `max_e (1/Q(e)) sum_{e in gamma(x,y)} |gamma(x,y)| pi(x) pi(y)`,
/// with loads of both orientations of an edge pooled.
pub fn path_bound_gap<P: PathSystem>(chain: &ReversibleChain, paths: &P) -> Result<BoundReport> {
    let pi = chain.pi();
    let load = edge_loads(chain, paths, |x, y| paths.path_len(x, y).unwrap_or(0) as f64 * pi[x] * pi[y])?;
    let mut best: f64 = 0.0;
    for e in 0..chain.num_directed_edges() {
        let (u, v) = chain.edge_endpoints(e);
        if u < v {
            let back = chain.edge_index(v, u).expect("reverse edge exists");
            best = best.max((load[e] + load[back]) / chain.conductance_at(e));
        }
    }
    Ok(BoundReport::from_log("inverse_gap_path_bound", best.ln()))
}

/// Bad sets for the good/bad bound. `bad_eta` defaults to `bad`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub bad: Vec<bool>,
    pub bad_eta: Option<Vec<bool>>,
}

impl Partition {
    pub fn bad_eta(&self) -> &[bool] {
        self.bad_eta.as_deref().unwrap_or(&self.bad)
    }
}

/// Weights under which the good/bad bound dominates the weighted path bound:
/// `lambda = pi(B)^{1-1/p}` on `B`, `mu = eta(B_eta)^{1-1/p}` on `B_eta`, one elsewhere.
pub fn good_bad_weights(pi: &[f64], eta: &ProbabilityVector, partition: &Partition, p: f64) -> Result<WeightAssignment> {
    check_p(p)?;
    let pb: f64 = pi.iter().zip(&partition.bad).filter(|(_, b)| **b).map(|(w, _)| w).sum();
    let eb: f64 = eta.as_slice().iter().zip(partition.bad_eta()).filter(|(_, b)| **b).map(|(w, _)| w).sum();
    let lam_b = if pb > 0.0 { pb.powf(1.0 - 1.0 / p) } else { 1.0 };
    let mu_b = if eb > 0.0 { eb.powf(1.0 - 1.0 / p) } else { 1.0 };
    let lambda = partition.bad.iter().map(|b| if *b { lam_b } else { 1.0 }).collect();
    let mu = partition.bad_eta().iter().map(|b| if *b { mu_b } else { 1.0 }).collect();
    WeightAssignment::new(lambda, mu)
}

/// Good/bad bound on `1/L_eta(p)`:
/// `2^{6/p-3} { gamma* max_e (1/Q(e)) sum_{x in G, y in G_eta, e in gamma} pi(x) eta(y)
///  + 2 (sum_{e in bad edges} 1/Q(e)) (pi(B)^{2/p} + eta(B_eta)^{2/p}) }`,
/// where bad edges lie on a path starting in `B` or ending in `B_eta`.
pub fn good_bad_bound<P: PathSystem>(
    chain: &ReversibleChain,
    paths: &P,
    p: f64,
    eta: &ProbabilityVector,
    partition: &Partition,
) -> Result<BoundReport> {
    check_p(p)?;
    let n = chain.n();
    if partition.bad.len() != n || partition.bad_eta().len() != n || eta.len() != n {
        return Err(BoundError::PartitionInvalid(format!("partition size differs from {n} states")));
    }
    let pi = chain.pi();
    let et = eta.as_slice();
    let bad = &partition.bad;
    let bad_eta = partition.bad_eta();

    let good_load =
        edge_loads(chain, paths, |x, y| if !bad[x] && !bad_eta[y] { pi[x] * et[y] } else { 0.0 })?;
    let bad_mark = edge_loads(chain, paths, |x, y| if bad[x] || bad_eta[y] { 1.0 } else { 0.0 })?;
    let mut gamma_star = 0usize;
    for x in 0..n {
        for y in 0..n {
            if x != y {
                gamma_star = gamma_star.max(paths.path_len(x, y).unwrap_or(0));
            }
        }
    }
    let first = good_load.iter().enumerate().map(|(e, w)| w / chain.conductance_at(e)).fold(0.0, f64::max);
    let bad_edges: f64 =
        bad_mark.iter().enumerate().filter(|(_, m)| **m > 0.0).map(|(e, _)| 1.0 / chain.conductance_at(e)).sum();
    let pb: f64 = pi.iter().zip(bad).filter(|(_, b)| **b).map(|(w, _)| w).sum();
    let eb: f64 = et.iter().zip(bad_eta).filter(|(_, b)| **b).map(|(w, _)| w).sum();
    let second = 2.0 * bad_edges * (pb.powf(2.0 / p) + eb.powf(2.0 / p));
    let value = 2f64.powf(6.0 / p - 3.0) * (gamma_star as f64 * first + second);
    Ok(BoundReport::from_log("inverse_l_eta_good_bad_bound", value.ln())
        .with_param("p", p)
        .with_param("gamma_star", gamma_star as f64)
        .with_param("good_congestion", first)
        .with_param("bad_edge_resistance", bad_edges)
        .with_param("pi_bad", pb)
        .with_param("eta_bad", eb))
}
