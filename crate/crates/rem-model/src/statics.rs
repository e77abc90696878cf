//! High-probability bounds on constrained and sub-cube partition functions,
//! evaluated on one instance.
//!
//! `ln N` is natural; the sub-cube bounds use `log2(c_u N)` as stated.

use serde::{Deserialize, Serialize};

use crate::error::{RemError, Result};
use crate::instance::{beta_c, RemInstance};
use crate::occupation::{c_u, grid_parameter};
use crate::partition::{log_partition, Constraint};

/// One evaluated inequality `lhs <= rhs` in log form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogInequality {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl LogInequality {
    fn at_most(name: &str, lhs: f64, rhs: f64) -> Self {
        Self { name: name.into(), lhs, rhs, holds: lhs <= rhs }
    }
}

/// Sub-cube bound for one split site `j` (1-based), with `alpha = (j-1)/N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubcubeCheck {
    pub j: usize,
    pub alpha: f64,
    pub regime: u8,
    pub inequality: LogInequality,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaticBoundsReport {
    pub n: usize,
    pub beta: f64,
    pub d: f64,
    pub c: f64,
    pub c1: f64,
    pub m: f64,
    pub c_u: f64,
    /// `ln Z(beta, <= -d) <= beta beta_c sqrt(c1 (1+c) N ln N) + N (beta d - d^2/2 + beta_c^2/2)`.
    pub low_partition: LogInequality,
    /// `ln Z >= -beta beta_c sqrt(c1 (1+c) N ln N) + N (beta^2/2 + beta_c^2/2)`, stored as `-lnZ <= -rhs`.
    pub partition_lower: LogInequality,
    pub subcube: Vec<SubcubeCheck>,
    /// Exact `ln Lambda^(1)(d)` against `ln sqrt N + beta beta_c sqrt(N log2(c_u N)) + beta d N`.
    pub lambda_one: LogInequality,
    /// Same `ln Lambda^(1)(d)` against the form with `sqrt(c1 (1+c) N ln N)`.
    pub lambda_one_relaxed: LogInequality,
    /// `max_j max_z ln (Z_{j-1}[z_j, z_{>j}] 2^{-j})` against `beta beta_c sqrt(N log2(c_u N)) + beta d N`.
    pub lambda_eta: LogInequality,
    pub all_hold: bool,
}

/// Regime and `ln Z_N(beta, d, alpha)` of the three-case sub-cube bound.
pub fn subcube_regime(beta: f64, d: f64, alpha: f64, m: f64, n: usize) -> (u8, f64) {
    let bc = beta_c();
    let nf = n as f64;
    let a2 = alpha * m * m - 1.0;
    let a = if a2 >= 0.0 { a2.sqrt() } else { f64::NEG_INFINITY };
    let high = nf * (beta * beta / 2.0 + alpha * bc * bc / 2.0);
    let low = beta * d * nf;
    if a < beta / bc * m {
        (1, low)
    } else if a < d / bc * m {
        let mx = low.max(high);
        (2, mx + ((low - mx).exp() + (high - mx).exp()).ln())
    } else {
        (3, high)
    }
}

/// Block sums of `e^{-beta H - shift} 1{H >= -dN}` over low and high sites.
struct BlockSums {
    shift: f64,
    /// `low[j-1][h]`: sum over sites `0..j-1` with the rest equal to `h << (j-1)`.
    low: Vec<Vec<f64>>,
    /// `high[j][l]`: sum over sites `j..N` with sites `0..j` equal to `l`.
    high: Vec<Vec<f64>>,
}

fn block_sums(inst: &RemInstance, d: f64) -> BlockSums {
    let n = inst.n;
    let c = Constraint::AtLeast { d };
    let shift = inst
        .energies
        .iter()
        .filter(|&&h| c.admits(h, n))
        .map(|&h| -inst.beta * h)
        .fold(f64::NEG_INFINITY, f64::max);
    let shift = if shift.is_finite() { shift } else { 0.0 };
    let w: Vec<f64> =
        inst.energies.iter().map(|&h| if c.admits(h, n) { (-inst.beta * h - shift).exp() } else { 0.0 }).collect();
    let mut low = vec![w.clone()];
    for _ in 0..n {
        let prev = low.last().unwrap();
        low.push((0..prev.len() / 2).map(|h| prev[2 * h] + prev[2 * h + 1]).collect());
    }
    let mut high = vec![Vec::new(); n + 1];
    high[n] = w;
    for j in (0..n).rev() {
        let prev = &high[j + 1];
        let half = 1usize << j;
        high[j] = (0..half).map(|l| prev[l] + prev[l + half]).collect();
    }
    BlockSums { shift, low, high }
}

fn max_ln(v: impl Iterator<Item = f64>) -> f64 {
    v.fold(0.0f64, f64::max).ln()
}

/// Evaluates the static bounds for one instance.
pub fn static_bounds_check(inst: &RemInstance, d: f64, c: f64, c1: f64) -> Result<StaticBoundsReport> {
    if !(d > 0.0 && c > 0.0 && c1 > 0.0) {
        return Err(RemError::InvalidArgument(format!("need d, c, c1 > 0; got {d}, {c}, {c1}")));
    }
    let n = inst.n;
    if n < 2 {
        return Err(RemError::InvalidArgument("N must be at least 2".into()));
    }
    let nf = n as f64;
    let beta = inst.beta;
    let bc = beta_c();
    let m = grid_parameter(n, c, c1);
    let cu = c_u(c, c1);
    let corr = beta * bc * (c1 * (1.0 + c) * nf * nf.ln()).sqrt();
    let corr2 = beta * bc * (nf * (cu * nf).log2()).sqrt();

    let ln_z = log_partition(inst, Constraint::None).log_value;
    let ln_low = log_partition(inst, Constraint::AtMost { d }).log_value;
    let low_partition = LogInequality::at_most(
        "low_partition",
        ln_low,
        corr + nf * (beta * d - d * d / 2.0 + bc * bc / 2.0),
    );
    let z_lower = -corr + nf * (beta * beta / 2.0 + bc * bc / 2.0);
    let partition_lower = LogInequality::at_most("partition_lower", -ln_z, -z_lower);

    let sums = block_sums(inst, d);
    let mut subcube = Vec::with_capacity(n);
    let mut lambda_one = f64::NEG_INFINITY;
    let mut lambda_eta = f64::NEG_INFINITY;
    for j in 1..=n {
        let alpha = (j - 1) as f64 / nf;
        let low = &sums.low[j - 1];
        let high = &sums.high[j];
        let lhs = max_ln(low.iter().copied()) + sums.shift;
        let (regime, ln_zn) = subcube_regime(beta, d, alpha, m, n);
        let ln_2j = j as f64 * std::f64::consts::LN_2;
        let mx = ln_2j.max(ln_zn);
        let rhs = 0.5 * nf.ln() + corr2 + mx + ((ln_2j - mx).exp() + (ln_zn - mx).exp()).ln();
        subcube.push(SubcubeCheck {
            j,
            alpha,
            regime,
            inequality: LogInequality::at_most(&format!("subcube_j{j}"), lhs, rhs),
        });
        lambda_eta = lambda_eta.max(lhs - ln_2j);
        // Site j-1 (0-based) is flipped: its value is bit 0 of h and bit j-1 of l.
        for b in 0..2usize {
            let first = max_ln(low.iter().enumerate().filter(|(h, _)| h & 1 == b).map(|(_, v)| *v));
            let second =
                max_ln(high.iter().enumerate().filter(|(l, _)| (l >> (j - 1)) & 1 != b).map(|(_, v)| *v));
            lambda_one = lambda_one.max(first + second + 2.0 * sums.shift - ln_z);
        }
    }
    let lambda_one_rhs = 0.5 * nf.ln() + corr2 + beta * d * nf;
    let lambda_one_relaxed_rhs = 0.5 * nf.ln() + corr + beta * d * nf;
    let report_lambda = LogInequality::at_most("lambda_one", lambda_one, lambda_one_rhs);
    let report_relaxed = LogInequality::at_most("lambda_one_relaxed", lambda_one, lambda_one_relaxed_rhs);
    let report_eta = LogInequality::at_most("lambda_eta", lambda_eta, corr2 + beta * d * nf);
    let all_hold = low_partition.holds
        && partition_lower.holds
        && subcube.iter().all(|s| s.inequality.holds)
        && report_lambda.holds
        && report_eta.holds;
    Ok(StaticBoundsReport {
        n,
        beta,
        d,
        c,
        c1,
        m,
        c_u: cu,
        low_partition,
        partition_lower,
        subcube,
        lambda_one: report_lambda,
        lambda_one_relaxed: report_relaxed,
        lambda_eta: report_eta,
        all_hold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::sample_instance;
    use crate::partition::{subcube_partition, FixedSpins};

    #[test]
    fn infinite_temperature_lower_bound_is_tight() {
        let inst = sample_instance(10, 0.0, 1).unwrap();
        let r = static_bounds_check(&inst, 0.5, 1.0, 1.0).unwrap();
        assert!((r.partition_lower.lhs - r.partition_lower.rhs).abs() < 1e-12);
        assert!(r.partition_lower.holds);
    }

    #[test]
    fn regime_one_below_the_first_threshold() {
        let (m, beta) = (2.0, 0.5);
        // alpha M^2 - 1 = 0 < (beta / beta_c) M.
        assert_eq!(subcube_regime(beta, 0.6, 0.25, m, 10).0, 1);
        assert_eq!(subcube_regime(beta, 0.6, 0.25, m, 10).1, 0.5 * 0.6 * 10.0);
        assert_eq!(subcube_regime(beta, 0.6, 1.0, m, 10).0, 3);
    }

    #[test]
    fn lambda_one_matches_brute_force() {
        let inst = sample_instance(6, 0.8, 3).unwrap();
        let d = 0.7;
        let c = Constraint::AtLeast { d };
        let ln_z = log_partition(&inst, Constraint::None).log_value;
        let mut best = f64::NEG_INFINITY;
        for j in 1..=6usize {
            for z in 0..64u32 {
                let a = subcube_partition(&inst, FixedSpins::high_sites(6, j - 1, z), c).unwrap().log_value;
                let flipped = z ^ (1 << (j - 1));
                let b = subcube_partition(&inst, FixedSpins::low_sites(j, flipped), c).unwrap().log_value;
                best = best.max(a + b - ln_z);
            }
        }
        let r = static_bounds_check(&inst, d, 1.0, 1.0).unwrap();
        assert!((r.lambda_one.lhs - best).abs() < 1e-12, "{} vs {}", r.lambda_one.lhs, best);
    }

    #[test]
    fn subcube_sup_matches_brute_force() {
        let inst = sample_instance(7, 1.1, 8).unwrap();
        let d = 0.5;
        let c = Constraint::AtLeast { d };
        let r = static_bounds_check(&inst, d, 1.0, 1.0).unwrap();
        for check in &r.subcube {
            let j = check.j;
            let best = (0..128u32)
                .map(|z| subcube_partition(&inst, FixedSpins::high_sites(7, j - 1, z), c).unwrap().log_value)
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((check.inequality.lhs - best).abs() < 1e-12);
        }
    }
}
