//! Occupation numbers of energy intervals.
//!
//! With `M = sqrt(N / log2(N c_u))` and `c_u = (2 ln 2 + c) / c1`, the line
//! `(-inf, dN]` of values of `-H` is cut into `Delta_0 = (-inf, beta_c N/M]`
//! and `Delta_k = (beta_c kN/M, beta_c (k+1)N/M]`. Intervals crossing `dN`
//! are clipped there and marked.

use serde::{Deserialize, Serialize};

use crate::error::{RemError, Result};
use crate::instance::{beta_c, RemInstance};
use crate::partition::FixedSpins;

/// `M = sqrt(N / log2(N c_u))`.
pub fn grid_parameter(n: usize, c: f64, c1: f64) -> f64 {
    let nf = n as f64;
    (nf / (nf * c_u(c, c1)).log2()).sqrt()
}

/// `c_u = (2 ln 2 + c) / c1`.
pub fn c_u(c: f64, c1: f64) -> f64 {
    (2.0 * std::f64::consts::LN_2 + c) / c1
}

/// `P[a < Z <= b]` for a standard normal `Z`.
pub fn normal_interval(a: f64, b: f64) -> f64 {
    let s = std::f64::consts::SQRT_2;
    let tail = |x: f64| if x == f64::NEG_INFINITY { 1.0 } else { 0.5 * libm::erfc(x / s) };
    if a >= 0.0 {
        tail(a) - tail(b)
    } else {
        // Lower tail form avoids cancellation for intervals below the mean.
        0.5 * libm::erfc(-b / s) - if a == f64::NEG_INFINITY { 0.0 } else { 0.5 * libm::erfc(-a / s) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupationInterval {
    pub k: usize,
    /// Lower end for `-H`; `-inf` for `k = 0`.
    pub lower: f64,
    pub upper: f64,
    pub clipped: bool,
    pub count: usize,
    /// `P[-H in interval]` for `H ~ N(0, N)`.
    pub p: f64,
}

/// The probability bracket for one unclipped `Delta_k`, `k >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketCheck {
    pub k: usize,
    pub p: f64,
    /// `beta_c (sqrt N / M) 2^{-(k+1)^2 N / M^2}`.
    pub lower: f64,
    /// `beta_c (sqrt N / M) 2^{-k^2 N / M^2}`.
    pub upper: f64,
    pub holds: bool,
    /// The same bracket with the Gaussian density factor `1/sqrt(2 pi)` on both sides.
    pub holds_with_density_factor: bool,
    /// `log2 rho_k` with `rho_k = 2^{N [(k+1)^2/M^2 - alpha]^+ + 2}`.
    pub log2_rho: f64,
    /// Large-deviation rate `lambda_k`; `inf` when `rho_k p_k >= 1`.
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OccupationProfile {
    pub n: usize,
    pub free_sites: usize,
    /// `alpha = free_sites / N`.
    pub alpha: f64,
    pub m: f64,
    pub c_u: f64,
    pub d: f64,
    pub intervals: Vec<OccupationInterval>,
    /// Configurations with `-H > dN`.
    pub above: usize,
    pub total: usize,
    pub sum_rule_holds: bool,
    pub brackets: Vec<BracketCheck>,
}

fn lambda_k(rho: f64, p: f64) -> f64 {
    if rho * p >= 1.0 {
        return f64::INFINITY;
    }
    rho * p * (rho * (1.0 - p) / (1.0 - rho * p)).ln() - (1.0 - p + rho * p * (1.0 - p) / (1.0 - rho * p)).ln()
}

/// Profile over the whole cube.
pub fn occupation_profile(inst: &RemInstance, d: f64, c: f64, c1: f64) -> Result<OccupationProfile> {
    occupation_profile_subcube(inst, FixedSpins::free(), d, c, c1)
}

/// Profile over the sub-cube agreeing with `fixed`.
pub fn occupation_profile_subcube(
    inst: &RemInstance,
    fixed: FixedSpins,
    d: f64,
    c: f64,
    c1: f64,
) -> Result<OccupationProfile> {
    if !(d > 0.0 && c > 0.0 && c1 > 0.0) {
        return Err(RemError::InvalidArgument(format!("need d, c, c1 > 0; got {d}, {c}, {c1}")));
    }
    let n = inst.n;
    let nf = n as f64;
    let m = grid_parameter(n, c, c1);
    if !(m > 0.0 && m.is_finite()) {
        return Err(RemError::InvalidArgument(format!("grid parameter M = {m} for N = {n}")));
    }
    let bc = beta_c();
    let step = bc * nf / m;
    let cut = d * nf;
    let sd = nf.sqrt();

    let values: Vec<f64> = inst
        .energies
        .iter()
        .enumerate()
        .filter(|(s, _)| fixed.contains(*s as u32))
        .map(|(_, &h)| -h)
        .collect();
    let total = values.len();
    let free_sites = total.trailing_zeros() as usize;

    let mut intervals = Vec::new();
    let mut lower = f64::NEG_INFINITY;
    let mut k = 0;
    while lower < cut {
        let full_upper = step * (k + 1) as f64;
        let upper = full_upper.min(cut);
        let count = values.iter().filter(|&&v| v > lower && v <= upper).count();
        let p = normal_interval(lower / sd, upper / sd);
        intervals.push(OccupationInterval { k, lower, upper, clipped: full_upper > cut, count, p });
        lower = upper;
        k += 1;
    }
    let above = values.iter().filter(|&&v| v > cut).count();
    let sum_rule_holds = intervals.iter().map(|i| i.count).sum::<usize>() + above == total;

    let alpha = free_sites as f64 / nf;
    let width = bc * sd / m;
    let k_check = intervals.iter().filter(|i| i.k >= 1 && !i.clipped).count().max(m.ceil() as usize);
    let log2_density = -0.5 * (2.0 * std::f64::consts::PI).log2();
    let brackets = (1..=k_check)
        .map(|k| {
            let kf = k as f64;
            let p = normal_interval(bc * kf / m * sd, bc * (kf + 1.0) / m * sd);
            let lo_exp = -(kf + 1.0) * (kf + 1.0) * nf / (m * m);
            let hi_exp = -kf * kf * nf / (m * m);
            let lower = width * lo_exp.exp2();
            let upper = width * hi_exp.exp2();
            let log2_rho = nf * ((kf + 1.0).powi(2) / (m * m) - alpha).max(0.0) + 2.0;
            BracketCheck {
                k,
                p,
                lower,
                upper,
                holds: lower < p && p < upper,
                holds_with_density_factor: width * (lo_exp + log2_density).exp2() < p
                    && p < width * (hi_exp + log2_density).exp2(),
                log2_rho,
                lambda: lambda_k(log2_rho.exp2(), p),
            }
        })
        .collect();
    Ok(OccupationProfile { n, free_sites, alpha, m, c_u: c_u(c, c1), d, intervals, above, total, sum_rule_holds, brackets })
}
