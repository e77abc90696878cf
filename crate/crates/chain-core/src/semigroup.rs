//! Semigroup action by uniformization.
//!
//! With `Lambda >= max_x sum_y K(x,y)` and `U = I + L / Lambda`,
//! `P_t = sum_k Pois(Lambda t; k) U^k`. The series is cut where the certified
//! Poisson tail drops below the configured tolerance.

use crate::chain::ReversibleChain;
use crate::error::{ChainError, Result};

/// Default bound on the discarded Poisson mass.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-12;

/// Truncated Poisson weights `Pois(m; 0..=K)` with a bound on the discarded mass.
#[derive(Debug, Clone)]
pub struct PoissonWeights {
    pub weights: Vec<f64>,
    pub tail_bound: f64,
}

fn ln_factorial(k: usize) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

/// Poisson weights for mean `m`, truncated once the tail is below `tol`.
///
/// Past the mode the pmf ratio `m/(k+1)` is below one, so the tail after `K`
/// is at most `pmf(K+1) / (1 - m/(K+2))`.
pub fn poisson_weights(m: f64, tol: f64) -> PoissonWeights {
    if m == 0.0 {
        return PoissonWeights { weights: vec![1.0], tail_bound: 0.0 };
    }
    let ln_m = m.ln();
    let mode = m.floor() as usize;
    let mut log_p = -m + mode as f64 * ln_m - ln_factorial(mode);
    // Walk down from the mode to 0, then up, in log domain.
    let mut lower = vec![0.0; mode + 1];
    lower[mode] = log_p;
    for k in (0..mode).rev() {
        lower[k] = lower[k + 1] + ((k + 1) as f64).ln() - ln_m;
    }
    let mut weights: Vec<f64> = lower.iter().map(|l| l.exp()).collect();
    let mut k = mode;
    loop {
        let next = log_p + ln_m - ((k + 1) as f64).ln();
        let ratio = m / (k as f64 + 2.0);
        if ratio < 1.0 {
            let tail = next.exp() / (1.0 - ratio);
            if tail < tol {
                return PoissonWeights { weights, tail_bound: tail };
            }
        }
        log_p = next;
        k += 1;
        weights.push(log_p.exp());
    }
}

/// `P_t f` by uniformization.
pub fn semigroup_apply(chain: &ReversibleChain, f: &[f64], t: f64) -> Result<Vec<f64>> {
    semigroup_apply_with_tolerance(chain, f, t, DEFAULT_TAIL_TOLERANCE)
}

/// `P_t f` with an explicit Poisson tail tolerance.
pub fn semigroup_apply_with_tolerance(chain: &ReversibleChain, f: &[f64], t: f64, tol: f64) -> Result<Vec<f64>> {
    if f.len() != chain.n() {
        return Err(ChainError::DimensionMismatch { expected: chain.n(), got: f.len() });
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(ChainError::InvalidArgument(format!("time {t}")));
    }
    let rate = chain.max_exit_rate();
    if t == 0.0 || rate == 0.0 {
        return Ok(f.to_vec());
    }
    let pw = poisson_weights(rate * t, tol);
    let mut v = f.to_vec();
    let mut out: Vec<f64> = v.iter().map(|x| x * pw.weights[0]).collect();
    for &w in &pw.weights[1..] {
        let lv = chain.generator_apply_unchecked(&v);
        for (vi, li) in v.iter_mut().zip(&lv) {
            *vi += li / rate;
        }
        for (o, vi) in out.iter_mut().zip(&v) {
            *o += w * vi;
        }
    }
    Ok(out)
}

/// Law at time `t` of the chain started from `mu`, using
/// `(mu P_t)(z) = pi(z) (P_t (mu/pi))(z)` under reversibility.
pub fn evolve_distribution(chain: &ReversibleChain, mu: &[f64], t: f64) -> Result<Vec<f64>> {
    if mu.len() != chain.n() {
        return Err(ChainError::DimensionMismatch { expected: chain.n(), got: mu.len() });
    }
    let pi = chain.pi();
    let h: Vec<f64> = mu.iter().zip(pi).map(|(m, p)| m / p).collect();
    let ph = semigroup_apply(chain, &h, t)?;
    Ok(ph.iter().zip(pi).map(|(v, p)| v * p).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Rate;

    fn two_state(a: f64, b: f64) -> ReversibleChain {
        ReversibleChain::new(
            vec![b / (a + b), a / (a + b)],
            [Rate { x: 0, y: 1, rate: a }, Rate { x: 1, y: 0, rate: b }],
        )
        .unwrap()
    }

    #[test]
    fn poisson_weights_sum_to_one() {
        for &m in &[1e-3, 0.7, 5.0, 80.0, 2500.0] {
            let pw = poisson_weights(m, 1e-12);
            let s: f64 = pw.weights.iter().sum();
            assert!((s - 1.0).abs() < 1e-11, "m={m} s={s}");
            assert!(pw.tail_bound < 1e-12);
        }
    }

    #[test]
    fn time_zero_is_identity() {
        let c = two_state(1.0, 2.0);
        assert_eq!(semigroup_apply(&c, &[3.0, -1.0], 0.0).unwrap(), vec![3.0, -1.0]);
    }

    #[test]
    fn two_state_closed_form() {
        let (a, b) = (0.7, 1.9);
        let c = two_state(a, b);
        let f = [2.0, -0.5];
        let pif = c.pi()[0] * f[0] + c.pi()[1] * f[1];
        for &t in &[0.01, 0.3, 1.0, 4.0, 20.0] {
            let got = semigroup_apply(&c, &f, t).unwrap();
            for x in 0..2 {
                let want = pif + (-(a + b) * t).exp() * (f[x] - pif);
                assert!((got[x] - want).abs() < 1e-10, "t={t}");
            }
        }
    }

    #[test]
    fn long_time_limit_is_the_mean() {
        let c = two_state(1.0, 3.0);
        let f = [1.0, 0.0];
        let got = semigroup_apply(&c, &f, 50.0).unwrap();
        for v in got {
            assert!((v - c.pi()[0]).abs() < 1e-10);
        }
    }

    #[test]
    fn evolved_distribution_keeps_mass() {
        let c = two_state(0.4, 2.2);
        let mu = evolve_distribution(&c, &[1.0, 0.0], 0.8).unwrap();
        assert!((mu.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
