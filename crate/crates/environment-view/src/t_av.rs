//! The disorder-averaged mixing time of the environment.
//!
//! For a uniform initial law `eta` the averaged distance reduces to
//! `Q[eta(|P_t phi^H - pi(phi^H)|)]`. Taking the sup over `phi` inside the
//! disorder average bounds it by `Q[d_eta(t)]`, which is estimated by the
//! seed mean of the certified upper envelope. Each seed's `d_eta` is
//! non-increasing, so the first grid time where the mean upper envelope is
//! at most `epsilon` is an upper estimate of `T_av(epsilon)`.

use chain_core::{d_eta_envelope, ProbabilityVector};
use rayon::prelude::*;
use rem_model::{beta_c, metropolis_chain, sample_instance};
use serde::{Deserialize, Serialize};

use crate::error::{EnvError, Result};

/// Fewer seeds than this produce a warning.
pub const MIN_SEEDS: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TAvOptions {
    pub epsilon: f64,
    pub time_grid: Vec<f64>,
    pub cap: usize,
    pub c: f64,
    pub c1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedEnvelope {
    pub seed: u64,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TAvReport {
    pub n: usize,
    pub beta: f64,
    pub epsilon: f64,
    pub time_grid: Vec<f64>,
    pub per_seed: Vec<SeedEnvelope>,
    pub mean_upper: Vec<f64>,
    /// Half-width of the normal 95% interval of `mean_upper`.
    pub upper_half_width: Vec<f64>,
    pub mean_lower: Vec<f64>,
    /// First grid time with `mean_upper <= epsilon`; `0` when `epsilon >= 2`.
    pub t_av_upper: Option<f64>,
    /// The same read from `mean_upper + half_width`.
    pub t_av_upper_conservative: Option<f64>,
    /// `ln(t_av_upper) / N`.
    pub log_rate: Option<f64>,
    /// `beta^2`.
    pub limit_rate: f64,
    /// `2 beta beta_c sqrt(c1 (1+c) ln N / N) + 4 ln N / N`.
    pub slack: f64,
    pub trend_holds: Option<bool>,
    pub warnings: Vec<String>,
}

fn first_below(grid: &[f64], values: &[f64], epsilon: f64) -> Option<f64> {
    grid.iter().zip(values).find(|(_, v)| **v <= epsilon).map(|(t, _)| *t)
}

pub fn t_av_estimate(n: usize, beta: f64, seeds: &[u64], opts: &TAvOptions) -> Result<TAvReport> {
    if n > opts.cap {
        return Err(EnvError::CapExceeded { n, cap: opts.cap });
    }
    if seeds.is_empty() || !(opts.epsilon > 0.0) {
        return Err(EnvError::InvalidArgument(format!("need seeds and epsilon > 0; got {} seeds", seeds.len())));
    }
    if opts.time_grid.is_empty() || opts.time_grid.windows(2).any(|w| w[0] >= w[1]) || opts.time_grid[0] < 0.0 {
        return Err(EnvError::InvalidArgument("time grid must be nonempty, nonnegative and increasing".into()));
    }
    let mut warnings = Vec::new();
    if seeds.len() < MIN_SEEDS {
        warnings.push(format!("{} seeds is below the recommended {MIN_SEEDS}", seeds.len()));
    }
    let eta = ProbabilityVector::uniform(1 << n);
    let per_seed: Vec<SeedEnvelope> = seeds
        .par_iter()
        .map(|&seed| {
            let inst = sample_instance(n, beta, seed)?;
            let chain = metropolis_chain(&inst, opts.cap)?;
            let env = d_eta_envelope(&chain, &eta, &opts.time_grid)?;
            Ok(SeedEnvelope { seed, lower: env.lower, upper: env.upper })
        })
        .collect::<Result<_>>()?;
    let count = seeds.len() as f64;
    let points = opts.time_grid.len();
    let mean = |pick: &dyn Fn(&SeedEnvelope) -> &Vec<f64>, i: usize| per_seed.iter().map(|s| pick(s)[i]).sum::<f64>() / count;
    let mean_upper: Vec<f64> = (0..points).map(|i| mean(&|s| &s.upper, i)).collect();
    let mean_lower: Vec<f64> = (0..points).map(|i| mean(&|s| &s.lower, i)).collect();
    let upper_half_width: Vec<f64> = (0..points)
        .map(|i| {
            let var = per_seed.iter().map(|s| (s.upper[i] - mean_upper[i]).powi(2)).sum::<f64>() / (count - 1.0).max(1.0);
            1.96 * (var / count).sqrt()
        })
        .collect();
    let (t_av_upper, t_av_upper_conservative) = if opts.epsilon >= 2.0 {
        (Some(0.0), Some(0.0))
    } else {
        let conservative: Vec<f64> = mean_upper.iter().zip(&upper_half_width).map(|(m, h)| m + h).collect();
        (first_below(&opts.time_grid, &mean_upper, opts.epsilon), first_below(&opts.time_grid, &conservative, opts.epsilon))
    };
    if t_av_upper.is_none() {
        warnings.push(format!("mean upper envelope stays above epsilon = {} on the grid", opts.epsilon));
    }
    let nf = n as f64;
    let log_rate = t_av_upper.filter(|t| *t > 0.0).map(|t| t.ln() / nf);
    let limit_rate = beta * beta;
    let slack = 2.0 * beta * beta_c() * (opts.c1 * (1.0 + opts.c) * nf.ln() / nf).sqrt() + 4.0 * nf.ln() / nf;
    let trend_holds = match t_av_upper {
        Some(0.0) => Some(true),
        Some(_) => log_rate.map(|r| r <= limit_rate + slack),
        None => None,
    };
    Ok(TAvReport {
        n,
        beta,
        epsilon: opts.epsilon,
        time_grid: opts.time_grid.clone(),
        per_seed,
        mean_upper,
        upper_half_width,
        mean_lower,
        t_av_upper,
        t_av_upper_conservative,
        log_rate,
        limit_rate,
        slack,
        trend_holds,
        warnings,
    })
}
