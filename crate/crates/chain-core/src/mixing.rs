//! Bracketing the initial-law-dependent mixing time
//! `T_eta(eps) = inf { t > 0 : d_eta(t) <= eps }`.
//!
//! The inner supremum `sup_{||f|| <= 1} eta(|P_s f - pi(f)|)` is non-increasing
//! in `s`: for `u >= 0`, `g = P_u f` has `||g|| <= ||f||` and `pi(g) = pi(f)`.
//! Both bracket sides are therefore searched by geometric bisection, and the
//! running supremum is still recomputed over all evaluated times. Without
//! local search the lower side is searched with mixture-only evaluations.

use serde::{Deserialize, Serialize};

use crate::chain::ReversibleChain;
use crate::envelope::{DecayEnvelope, EnvelopeEngine, EnvelopePoint};
use crate::error::{ChainError, Result};
use crate::prob::ProbabilityVector;

/// Search settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TEtaOptions {
    pub t_min: f64,
    pub t_max: f64,
    /// Target for `T_hi / T_lo - 1` and for each bisection.
    pub rel_tol: f64,
    /// Cap on bisection steps per side.
    pub max_iter: usize,
    /// First probe; defaults to the relaxation time `1/gap`.
    pub t_start: Option<f64>,
}

impl Default for TEtaOptions {
    fn default() -> Self {
        Self { t_min: 1e-3, t_max: 1e9, rel_tol: 1e-3, max_iter: 60, t_start: None }
    }
}

/// `T_lo <= T_eta(eps) <= T_hi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TEtaBracket {
    pub epsilon: f64,
    /// Largest evaluated time with `lower > eps`; zero if there is none.
    pub t_lo: f64,
    /// First evaluated time with `running_sup_upper <= eps`.
    pub t_hi: f64,
    /// `t_hi / t_lo <= 1 + rel_tol`.
    pub converged: bool,
    /// Points where both sides were evaluated.
    pub envelope: DecayEnvelope,
}

/// Brackets `T_eta(eps)` for the chain started from `eta`.
pub fn t_eta(chain: &ReversibleChain, eta: &ProbabilityVector, epsilon: f64, opts: &TEtaOptions) -> Result<TEtaBracket> {
    let engine = EnvelopeEngine::new(chain, eta)?;
    t_eta_with(&engine, epsilon, opts)
}

#[derive(Clone, Copy)]
enum Side {
    Upper,
    Lower,
}

struct Probe<'a> {
    engine: &'a EnvelopeEngine,
    points: Vec<EnvelopePoint>,
    /// Lower-side values computed without the row matrix.
    lower_only: Vec<(f64, f64)>,
}

impl Probe<'_> {
    fn at(&mut self, t: f64) -> Result<EnvelopePoint> {
        if let Some(p) = self.points.iter().find(|p| p.time == t) {
            return Ok(*p);
        }
        let p = self.engine.evaluate(t)?;
        self.points.push(p);
        Ok(p)
    }

    fn side(&mut self, t: f64, side: Side) -> Result<f64> {
        match side {
            Side::Upper => Ok(self.at(t)?.upper),
            Side::Lower if self.engine.uses_local_search() => Ok(self.at(t)?.lower),
            Side::Lower => {
                if let Some(p) = self.points.iter().find(|p| p.time == t) {
                    return Ok(p.lower);
                }
                if let Some(&(_, l)) = self.lower_only.iter().find(|(s, _)| *s == t) {
                    return Ok(l);
                }
                let l = self.engine.evaluate_lower(t)?;
                self.lower_only.push((t, l));
                Ok(l)
            }
        }
    }

    /// Finds `a < b` with `side(a) > eps >= side(b)` and bisects to `b/a <= 1 + tol`;
    /// `None` when the side is already at most `eps` at `t_min`.
    fn bisect(&mut self, start: f64, eps: f64, opts: &TEtaOptions, side: Side) -> Result<Option<(f64, f64)>> {
        let mut t = start.clamp(opts.t_min, opts.t_max);
        let (mut a, mut b);
        if self.side(t, side)? > eps {
            a = t;
            loop {
                if t >= opts.t_max {
                    return Err(ChainError::NotReachedWithinHorizon { epsilon: eps, t_max: opts.t_max });
                }
                t = (2.0 * t).min(opts.t_max);
                if self.side(t, side)? <= eps {
                    b = t;
                    break;
                }
                a = t;
            }
        } else {
            b = t;
            loop {
                if t <= opts.t_min {
                    return Ok(None);
                }
                t = (0.5 * t).max(opts.t_min);
                if self.side(t, side)? > eps {
                    a = t;
                    break;
                }
                b = t;
            }
        }
        for _ in 0..opts.max_iter {
            if b / a <= 1.0 + opts.rel_tol {
                break;
            }
            let mid = (a * b).sqrt();
            if self.side(mid, side)? > eps {
                a = mid;
            } else {
                b = mid;
            }
        }
        Ok(Some((a, b)))
    }
}

/// Brackets `T_eta(eps)` with a prepared engine.
pub fn t_eta_with(engine: &EnvelopeEngine, epsilon: f64, opts: &TEtaOptions) -> Result<TEtaBracket> {
    if !(epsilon > 0.0) {
        return Err(ChainError::InvalidArgument(format!("epsilon {epsilon}")));
    }
    if !(opts.t_min > 0.0 && opts.t_max > opts.t_min) {
        return Err(ChainError::InvalidGrid(format!("t_min {} t_max {}", opts.t_min, opts.t_max)));
    }
    let start = opts.t_start.unwrap_or_else(|| 1.0 / engine.spectrum().gap());
    let mut probe = Probe { engine, points: Vec::new(), lower_only: Vec::new() };
    let upper_side = probe.bisect(start, epsilon, opts, Side::Upper)?;
    let lower_start = upper_side.map_or(opts.t_min, |(a, _)| a);
    probe.bisect(lower_start, epsilon, opts, Side::Lower)?;

    let t_lo = probe
        .points
        .iter()
        .map(|p| (p.time, p.lower))
        .chain(probe.lower_only.iter().copied())
        .filter(|(_, l)| *l > epsilon)
        .map(|(t, _)| t)
        .fold(0.0, f64::max);
    let envelope = DecayEnvelope::from_points(probe.points);
    let t_hi = envelope
        .time_grid
        .iter()
        .zip(&envelope.running_sup_upper)
        .find(|(_, u)| **u <= epsilon)
        .map(|(t, _)| *t)
        .ok_or(ChainError::NotReachedWithinHorizon { epsilon, t_max: opts.t_max })?;
    let converged = t_lo > 0.0 && t_hi / t_lo <= 1.0 + opts.rel_tol || t_hi == opts.t_min;
    Ok(TEtaBracket { epsilon, t_lo, t_hi, converged, envelope })
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
    fn two_state_point_mass_encloses_closed_form() {
        let (a, b) = (1.0, 1.0);
        let c = two_state(a, b);
        let eta = ProbabilityVector::point_mass(2, 0);
        for &eps in &[0.5, 0.1, 1e-3] {
            let br = t_eta(&c, &eta, eps, &TEtaOptions::default()).unwrap();
            let exact = (1.0 / eps).ln() / (a + b);
            assert!(br.t_lo <= exact && exact <= br.t_hi, "{br:?}");
            assert!(br.converged);
            assert!(br.t_hi / br.t_lo <= 1.0 + 1e-3 + 1e-12);
        }
    }

    #[test]
    fn already_mixed_returns_t_min() {
        let c = two_state(1.0, 1.0);
        let eta = ProbabilityVector::point_mass(2, 0);
        let opts = TEtaOptions::default();
        let br = t_eta(&c, &eta, 1.5, &opts).unwrap();
        assert_eq!(br.t_hi, opts.t_min);
        assert_eq!(br.t_lo, 0.0);
    }

    #[test]
    fn smaller_epsilon_takes_longer() {
        let c = two_state(0.3, 2.0);
        let eta = ProbabilityVector::point_mass(2, 1);
        let opts = TEtaOptions::default();
        let t1 = t_eta(&c, &eta, 0.2, &opts).unwrap();
        let t2 = t_eta(&c, &eta, 0.02, &opts).unwrap();
        assert!(t2.t_hi >= t1.t_hi);
        assert!(t2.t_lo >= t1.t_lo);
    }

    #[test]
    fn horizon_is_enforced() {
        let c = two_state(1.0, 1.0);
        let eta = ProbabilityVector::point_mass(2, 0);
        let opts = TEtaOptions { t_max: 1.0, ..Default::default() };
        assert!(matches!(t_eta(&c, &eta, 1e-6, &opts), Err(ChainError::NotReachedWithinHorizon { .. })));
    }
}
