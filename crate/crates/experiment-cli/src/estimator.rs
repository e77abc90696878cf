//! Seed-quantile estimate of `T_N(eps, c, eta)`.
//!
//! `T_N` is the smallest `T` such that the disorder probability of being
//! mixed by `T` is at least `1 - e^{-cN}`. With `k` seeds it is estimated by
//! the `ceil(k q)`-th smallest certified upper bound `t_eta_upper`,
//! `q = 1 - e^{-cN}`. The Wilson interval for the proportion `q` is mapped to
//! order statistics to give a confidence range.

use rem_model::beta_c;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::sweep::SweepRecord;

pub const MIN_SEEDS: usize = 30;
const Z95: f64 = 1.959963984540054;

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Wilson interval for a proportion known only as a level `q` over `trials`.
fn wilson_for_level(q: f64, trials: usize) -> (f64, f64) {
    let n = trials as f64;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (q + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (q * (1.0 - q) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn order_stat(sorted: &[f64], level: f64) -> f64 {
    let k = ((level * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[k - 1]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TNEstimate {
    pub n: usize,
    pub beta: f64,
    pub epsilon: f64,
    pub c: f64,
    pub seeds: usize,
    /// `q = 1 - e^{-cN}`.
    pub level: f64,
    pub t_n_upper: f64,
    pub t_n_ci_low: f64,
    pub t_n_ci_high: f64,
    /// `ln(t_n_upper) / N`; `None` when the estimate is 0.
    pub log_rate: Option<f64>,
    pub beta_squared: f64,
    pub beta_beta_c: f64,
    /// `2 beta beta_c sqrt(c1 (1+c) ln N / N) + 4 ln N / N`.
    pub slack: f64,
    /// Soft: `log_rate <= beta^2 + slack`.
    pub trend_holds: bool,
    pub median_t_eta_upper: f64,
    pub median_inverse_lambda: f64,
    /// Soft: the median uniform-start time is below the median `1/lambda_N`.
    pub median_separation: bool,
    /// Fraction of seeds whose exact time is within the path-based bound.
    pub bound_satisfaction: Option<f64>,
    pub bound_satisfaction_ci: Option<(f64, f64)>,
    pub lower_side_indicative: bool,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// One estimate per `(N, beta)` group of successful records, in input order of first appearance.
pub fn t_n_estimator(records: &[SweepRecord], epsilon: f64, c: f64, c1: f64) -> Result<Vec<TNEstimate>> {
    let mut keys: Vec<(usize, f64)> = Vec::new();
    for r in records {
        if !keys.iter().any(|k| k.0 == r.n && k.1 == r.beta) {
            keys.push((r.n, r.beta));
        }
    }
    keys.into_iter()
        .map(|(n, beta)| {
            let group: Vec<&SweepRecord> =
                records.iter().filter(|r| r.n == n && r.beta == beta && r.error.is_none()).collect();
            if group.len() < MIN_SEEDS {
                return Err(CliError::InsufficientSeeds { n, beta, got: group.len(), need: MIN_SEEDS });
            }
            let nf = n as f64;
            let level = 1.0 - (-c * nf).exp();
            let mut uppers: Vec<f64> = group.iter().map(|r| r.t_eta_upper).collect();
            uppers.sort_by(f64::total_cmp);
            let (t_n_upper, lo, hi) = if epsilon >= 2.0 {
                (0.0, 0.0, 0.0)
            } else {
                let (ql, qh) = wilson_for_level(level, uppers.len());
                (order_stat(&uppers, level), order_stat(&uppers, ql), order_stat(&uppers, qh))
            };
            let log_rate = (t_n_upper > 0.0).then(|| t_n_upper.ln() / nf);
            let slack = 2.0 * beta * beta_c() * (c1 * (1.0 + c) * nf.ln() / nf).sqrt() + 4.0 * nf.ln() / nf;
            let trend_holds = log_rate.is_none_or(|r| r <= beta * beta + slack);
            let checked: Vec<bool> = group.iter().filter_map(|r| r.verdict_bound_consistent).collect();
            let (bound_satisfaction, bound_satisfaction_ci) = if checked.is_empty() {
                (None, None)
            } else {
                let ok = checked.iter().filter(|b| **b).count();
                (Some(ok as f64 / checked.len() as f64), Some(wilson_interval(ok, checked.len())))
            };
            let median_t_eta_upper = median(uppers.clone());
            let median_inverse_lambda = median(group.iter().map(|r| 1.0 / r.lambda_n).collect());
            Ok(TNEstimate {
                n,
                beta,
                epsilon,
                c,
                seeds: group.len(),
                level,
                t_n_upper,
                t_n_ci_low: lo,
                t_n_ci_high: hi,
                log_rate,
                beta_squared: beta * beta,
                beta_beta_c: beta * beta_c(),
                slack,
                trend_holds,
                median_t_eta_upper,
                median_inverse_lambda,
                median_separation: median_t_eta_upper < median_inverse_lambda,
                bound_satisfaction,
                bound_satisfaction_ci,
                lower_side_indicative: true,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(n: usize, beta: f64, seed: u64, t: f64) -> SweepRecord {
        SweepRecord { n, beta, seed, t_eta_upper: t, t_eta_lower: t / 2.0, lambda_n: 1.0, ..Default::default() }
    }

    #[test]
    fn wilson_reference_values() {
        // 8 of 10: (0.4902, 0.9433).
        let (lo, hi) = wilson_interval(8, 10);
        assert!((lo - 0.4902).abs() < 1e-4 && (hi - 0.9433).abs() < 1e-4);
    }

    #[test]
    fn quantile_is_an_order_statistic() {
        let recs: Vec<SweepRecord> = (0..40).map(|s| rec(4, 0.5, s, (s + 1) as f64)).collect();
        let est = t_n_estimator(&recs, 0.5, 0.1, 1.0).unwrap();
        // q = 1 - e^{-0.4} = 0.3297, ceil(40 q) = 14.
        assert_eq!(est[0].t_n_upper, 14.0);
        assert!(est[0].t_n_ci_low <= 14.0 && est[0].t_n_ci_high >= 14.0);
    }

    #[test]
    fn too_few_seeds() {
        let recs: Vec<SweepRecord> = (0..5).map(|s| rec(4, 0.5, s, 1.0)).collect();
        assert!(matches!(t_n_estimator(&recs, 0.5, 1.0, 1.0), Err(CliError::InsufficientSeeds { .. })));
    }

    #[test]
    fn large_epsilon_gives_zero() {
        let recs: Vec<SweepRecord> = (0..30).map(|s| rec(4, 0.5, s, 3.0)).collect();
        let est = t_n_estimator(&recs, 2.0, 1.0, 1.0).unwrap();
        assert_eq!(est[0].t_n_upper, 0.0);
        assert_eq!(est[0].log_rate, None);
    }

    proptest::proptest! {
        #[test]
        fn wilson_contains_the_sample_proportion(trials in 1usize..500, frac in 0.0f64..=1.0) {
            let k = ((trials as f64) * frac).round() as usize;
            let (lo, hi) = wilson_interval(k, trials);
            let p = k as f64 / trials as f64;
            proptest::prop_assert!(0.0 <= lo && lo <= p + 1e-12 && p <= hi + 1e-12 && hi <= 1.0);
        }

        #[test]
        fn estimate_is_bracketed_by_the_sample(
            ts in proptest::collection::vec(1e-3f64..1e6, 30..80),
            c in 0.01f64..2.0,
            n in 2usize..14,
        ) {
            let recs: Vec<SweepRecord> = ts.iter().enumerate().map(|(s, &t)| rec(n, 0.5, s as u64, t)).collect();
            let est = &t_n_estimator(&recs, 0.5, c, 1.0).unwrap()[0];
            let lo = ts.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = ts.iter().copied().fold(0.0, f64::max);
            proptest::prop_assert!(ts.contains(&est.t_n_upper));
            proptest::prop_assert!(lo <= est.t_n_ci_low && est.t_n_ci_low <= est.t_n_upper);
            proptest::prop_assert!(est.t_n_upper <= est.t_n_ci_high && est.t_n_ci_high <= hi);
        }
    }
}
