//! Exact spectral gaps across sizes and disorder samples.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::metropolis_chain;
use crate::error::{RemError, Result};
use crate::instance::{beta_c, sample_instance};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRecord {
    pub n: usize,
    pub seed: u64,
    pub gap: f64,
    /// `-(1/N) ln gap`.
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapSizeSummary {
    pub n: usize,
    pub median_rate: f64,
    /// `beta sqrt(ln N / N)`, the band half-width per unit of the constant.
    pub band_unit: f64,
    pub within_band: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapSweepReport {
    pub beta: f64,
    /// `beta beta_c`.
    pub limit: f64,
    pub records: Vec<GapRecord>,
    pub sizes: Vec<GapSizeSummary>,
    /// Band constant fitted so that every median lies in `limit +- c beta sqrt(ln N / N)`.
    pub fitted_c: f64,
    /// Band constant used for `within_band`.
    pub band_c: f64,
    /// Distance of the median from the limit is non-increasing in `N`.
    pub approaches_limit: bool,
}

/// Exact gaps for every `(N, seed)`; `band_c` sets the band reported per size.
pub fn rem_gap_sweep(n_list: &[usize], beta: f64, seeds: &[u64], cap: usize, band_c: f64) -> Result<GapSweepReport> {
    if let Some(&n) = n_list.iter().find(|&&n| n > cap) {
        return Err(RemError::CapExceeded { n, cap });
    }
    if n_list.is_empty() || seeds.is_empty() {
        return Err(RemError::InvalidArgument("empty size or seed list".into()));
    }
    let jobs: Vec<(usize, u64)> = n_list.iter().flat_map(|&n| seeds.iter().map(move |&s| (n, s))).collect();
    let records = jobs
        .into_par_iter()
        .map(|(n, seed)| {
            let inst = sample_instance(n, beta, seed)?;
            let gap = chain_core::spectral_gap(&metropolis_chain(&inst, cap)?)?.gap;
            Ok(GapRecord { n, seed, gap, rate: -gap.ln() / n as f64 })
        })
        .collect::<Result<Vec<_>>>()?;
    let limit = beta * beta_c();
    let mut sizes = Vec::new();
    let mut fitted_c: f64 = 0.0;
    for &n in n_list {
        let mut rates: Vec<f64> = records.iter().filter(|r| r.n == n).map(|r| r.rate).collect();
        rates.sort_by(f64::total_cmp);
        let k = rates.len();
        let median = if k % 2 == 1 { rates[k / 2] } else { 0.5 * (rates[k / 2 - 1] + rates[k / 2]) };
        let nf = n as f64;
        let band_unit = beta * (nf.ln() / nf).sqrt();
        if band_unit > 0.0 {
            fitted_c = fitted_c.max((median - limit).abs() / band_unit);
        }
        sizes.push(GapSizeSummary {
            n,
            median_rate: median,
            band_unit,
            within_band: (median - limit).abs() <= band_c * band_unit,
        });
    }
    let mut ordered = sizes.clone();
    ordered.sort_by_key(|s| s.n);
    let approaches_limit =
        ordered.windows(2).all(|w| (w[1].median_rate - limit).abs() <= (w[0].median_rate - limit).abs());
    Ok(GapSweepReport { beta, limit, records, sizes, fitted_c, band_c, approaches_limit })
}
