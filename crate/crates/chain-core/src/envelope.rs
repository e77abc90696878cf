//! Certified brackets for `sup_{||f||_inf <= 1} eta(|P_s f - pi(f)|)`.
//!
//! For each time `s` the engine returns
//! * `lower(s) = 2 d_TV(eta P_s, pi)`, the value at the sign vector of the
//!   signed measure `eta P_s - pi`, optionally raised by coordinate-flip
//!   local search over sign vectors;
//! * `upper(s) = sum_y eta(y) 2 d_TV(P_s(y, .), pi)`.
//!
//! Both come from the spectral form
//! `p_s(y,z) - pi(z) = sqrt(pi(z)/pi(y)) sum_{k>=1} v_k(y) v_k(z) e^{-l_k s}`.
//! Modes with `l_k s` beyond a cutoff are dropped and replaced by the
//! Cauchy-Schwarz remainder `sqrt(sum_{dropped} v_k(y)^2 e^{-2 l_k s}) / sqrt(pi(y))`,
//! which is subtracted from `lower` and added to `upper`.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::chain::ReversibleChain;
use crate::error::{ChainError, Result};
use crate::prob::ProbabilityVector;
use crate::spectral::Spectrum;

/// Bracket values on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayEnvelope {
    pub time_grid: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// `max_{s >= t, s in grid} upper(s)`.
    pub running_sup_upper: Vec<f64>,
    /// `2 d_TV(eta P_s, pi)` before local search and remainder correction.
    pub mixture_tv2: Vec<f64>,
}

impl DecayEnvelope {
    /// Builds an envelope from unsorted points, merging duplicate times.
    pub fn from_points(mut points: Vec<EnvelopePoint>) -> Self {
        points.sort_by(|a, b| a.time.total_cmp(&b.time));
        points.dedup_by(|a, b| a.time == b.time);
        let time_grid = points.iter().map(|p| p.time).collect();
        let lower = points.iter().map(|p| p.lower).collect();
        let upper: Vec<f64> = points.iter().map(|p| p.upper).collect();
        let mixture_tv2 = points.iter().map(|p| p.mixture_tv2).collect();
        let mut running_sup_upper = upper.clone();
        for i in (0..running_sup_upper.len().saturating_sub(1)).rev() {
            running_sup_upper[i] = running_sup_upper[i].max(running_sup_upper[i + 1]);
        }
        Self { time_grid, lower, upper, running_sup_upper, mixture_tv2 }
    }

    pub fn len(&self) -> usize {
        self.time_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time_grid.is_empty()
    }
}

/// Bracket at a single time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub time: f64,
    pub lower: f64,
    pub upper: f64,
    pub mixture_tv2: f64,
    /// Remainder added to `upper` for dropped modes.
    pub remainder: f64,
}

/// Modes with `l_k s` above `MODE_CUTOFF + ln(1/pi_min)/2` are dropped.
const MODE_CUTOFF: f64 = 45.0;

/// Reusable evaluator for a fixed chain and initial law.
#[derive(Debug, Clone)]
pub struct EnvelopeEngine {
    spectrum: Spectrum,
    eta: Vec<f64>,
    rows: Vec<usize>,
    inv_sqrt_pi_rows: Vec<f64>,
    /// `sum_y eta(y) v_k(y) / sqrt(pi(y))` for every mode.
    mixture_coeffs: Vec<f64>,
    pi_min: f64,
    local_search_sweeps: usize,
}

impl EnvelopeEngine {
    pub fn new(chain: &ReversibleChain, eta: &ProbabilityVector) -> Result<Self> {
        Self::with_spectrum(chain, Spectrum::compute(chain)?, eta)
    }

    pub fn with_spectrum(chain: &ReversibleChain, spectrum: Spectrum, eta: &ProbabilityVector) -> Result<Self> {
        let n = chain.n();
        if eta.len() != n || spectrum.n() != n {
            return Err(ChainError::DimensionMismatch { expected: n, got: eta.len().min(spectrum.n()) });
        }
        let eta = eta.as_slice().to_vec();
        let rows: Vec<usize> = (0..n).filter(|&y| eta[y] > 0.0).collect();
        let sp = spectrum.sqrt_pi();
        let inv_sqrt_pi_rows = rows.iter().map(|&y| 1.0 / sp[y]).collect();
        let v = spectrum.vectors();
        let mixture_coeffs = (0..n).map(|k| rows.iter().map(|&y| eta[y] * v[(y, k)] / sp[y]).sum()).collect();
        Ok(Self {
            spectrum,
            eta,
            rows,
            inv_sqrt_pi_rows,
            mixture_coeffs,
            pi_min: chain.pi_min(),
            local_search_sweeps: 0,
        })
    }

    /// Enables coordinate-flip local search on the lower side.
    pub fn with_local_search(mut self, sweeps: usize) -> Self {
        self.local_search_sweeps = sweeps;
        self
    }

    pub fn uses_local_search(&self) -> bool {
        self.local_search_sweeps > 0
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    fn kept_modes(&self, s: f64) -> (Vec<usize>, Vec<usize>) {
        let values = self.spectrum.values();
        let cutoff = MODE_CUTOFF + 0.5 * (1.0 / self.pi_min).ln();
        (1..self.spectrum.n()).partition(|&k| values[k] * s <= cutoff)
    }

    fn check_time(s: f64) -> Result<()> {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(ChainError::InvalidGrid(format!("time {s}")));
        }
        Ok(())
    }

    /// Mixture `eta P_s - pi` and the remainder of its dropped modes.
    fn mixture(&self, s: f64, kept: &[usize], dropped: &[usize]) -> (Vec<f64>, f64) {
        let n = self.spectrum.n();
        let values = self.spectrum.values();
        let v = self.spectrum.vectors();
        let sp = self.spectrum.sqrt_pi();
        let mut mixture = vec![0.0; n];
        for &k in kept {
            let c = self.mixture_coeffs[k] * (-values[k] * s).exp();
            if c != 0.0 {
                let col = v.col(k);
                for z in 0..n {
                    mixture[z] += c * col[z];
                }
            }
        }
        for z in 0..n {
            mixture[z] *= sp[z];
        }
        let rem_mix = dropped
            .iter()
            .map(|&k| (self.mixture_coeffs[k] * (-values[k] * s).exp()).powi(2))
            .sum::<f64>()
            .sqrt();
        (mixture, rem_mix)
    }

    /// Lower side only, `2 d_TV(eta P_s, pi)` minus the remainder, without the row computation.
    pub fn evaluate_lower(&self, s: f64) -> Result<f64> {
        Self::check_time(s)?;
        let (kept, dropped) = self.kept_modes(s);
        let (mixture, rem_mix) = self.mixture(s, &kept, &dropped);
        let tv2: f64 = mixture.iter().map(|a| a.abs()).sum();
        Ok((tv2 - rem_mix).max(0.0).min(2.0))
    }

    /// Bracket at time `s > 0`.
    pub fn evaluate(&self, s: f64) -> Result<EnvelopePoint> {
        Self::check_time(s)?;
        let n = self.spectrum.n();
        let values = self.spectrum.values();
        let v = self.spectrum.vectors();
        let sp = self.spectrum.sqrt_pi();
        let (kept, dropped) = self.kept_modes(s);
        let decay: Vec<f64> = kept.iter().map(|&k| (-values[k] * s).exp()).collect();
        let m = kept.len();
        let r = self.rows.len();

        // Mixture: m(z) = sum_k c_k e^{-l_k s} v_k(z) sqrt(pi(z)).
        let (mixture, rem_mix) = self.mixture(s, &kept, &dropped);
        let mixture_tv2: f64 = mixture.iter().map(|a| a.abs()).sum();

        // Rows: M = Y Z^T with Y(y,k) = v_k(y) e^{-l_k s} / sqrt(pi(y)), Z(z,k) = v_k(z) sqrt(pi(z)).
        let mut row_abs = vec![0.0; r];
        let mut full_rows: Option<Mat<f64>> = None;
        if m > 0 {
            let y = Mat::<f64>::from_fn(r, m, |i, j| v[(self.rows[i], kept[j])] * decay[j] * self.inv_sqrt_pi_rows[i]);
            let zt = Mat::<f64>::from_fn(m, n, |j, z| v[(z, kept[j])] * sp[z]);
            let mm = &y * &zt;
            for z in 0..n {
                let col = mm.col(z);
                for i in 0..r {
                    row_abs[i] += col[i].abs();
                }
            }
            if self.local_search_sweeps > 0 {
                full_rows = Some(mm);
            }
        }
        let mut tail = vec![0.0; r];
        for &k in &dropped {
            let d2 = (-2.0 * values[k] * s).exp();
            if d2 == 0.0 {
                continue;
            }
            let col = v.col(k);
            for (i, &yy) in self.rows.iter().enumerate() {
                tail[i] += col[yy] * col[yy] * d2;
            }
        }
        let row_rem: Vec<f64> = tail.iter().zip(&self.inv_sqrt_pi_rows).map(|(t, q)| t.sqrt() * q).collect();
        let eta_rows: Vec<f64> = self.rows.iter().map(|&y| self.eta[y]).collect();
        let remainder: f64 = eta_rows.iter().zip(&row_rem).map(|(e, q)| e * q).sum();
        let upper_raw: f64 = eta_rows.iter().zip(&row_abs).map(|(e, a)| e * a).sum::<f64>() + remainder;
        let upper = upper_raw.min(2.0);
        let mut lower = (mixture_tv2 - rem_mix).max(0.0);

        if let Some(mm) = full_rows {
            let f0: Vec<f64> = mixture.iter().map(|a| if *a >= 0.0 { 1.0 } else { -1.0 }).collect();
            let best = local_search(&mm, &eta_rows, f0, self.local_search_sweeps);
            lower = lower.max((best - remainder).max(0.0));
        }
        Ok(EnvelopePoint { time: s, lower: lower.min(upper), upper, mixture_tv2, remainder })
    }
}

/// Greedy coordinate flips maximizing `sum_y eta(y) |sum_z M(y,z) f(z)|` over sign vectors.
fn local_search(mm: &Mat<f64>, eta_rows: &[f64], mut f: Vec<f64>, sweeps: usize) -> f64 {
    let (r, n) = (mm.nrows(), mm.ncols());
    let mut g: Vec<f64> = (0..r).map(|i| (0..n).map(|z| mm[(i, z)] * f[z]).sum()).collect();
    let objective = |g: &[f64]| -> f64 { g.iter().zip(eta_rows).map(|(a, e)| e * a.abs()).sum() };
    let mut best = objective(&g);
    for _ in 0..sweeps {
        let mut improved = false;
        for z in 0..n {
            let delta = -2.0 * f[z];
            let cand: f64 = (0..r).map(|i| eta_rows[i] * (g[i] + delta * mm[(i, z)]).abs()).sum();
            if cand > best * (1.0 + 1e-14) {
                for i in 0..r {
                    g[i] += delta * mm[(i, z)];
                }
                f[z] = -f[z];
                best = cand;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    best
}

/// Bracket on an explicit increasing grid of positive times.
pub fn d_eta_envelope(chain: &ReversibleChain, eta: &ProbabilityVector, time_grid: &[f64]) -> Result<DecayEnvelope> {
    validate_grid(time_grid)?;
    let engine = EnvelopeEngine::new(chain, eta)?;
    envelope_on_grid(&engine, time_grid)
}

/// Bracket on a grid using a prepared engine.
pub fn envelope_on_grid(engine: &EnvelopeEngine, time_grid: &[f64]) -> Result<DecayEnvelope> {
    validate_grid(time_grid)?;
    let points = time_grid.iter().map(|&t| engine.evaluate(t)).collect::<Result<Vec<_>>>()?;
    Ok(DecayEnvelope::from_points(points))
}

fn validate_grid(time_grid: &[f64]) -> Result<()> {
    if time_grid.is_empty() {
        return Err(ChainError::EmptyGrid);
    }
    if time_grid.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(ChainError::InvalidGrid("times must be positive and finite".into()));
    }
    if time_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ChainError::InvalidGrid("times must be strictly increasing".into()));
    }
    Ok(())
}

/// `n` geometrically spaced times from `t_min` to `t_max`.
pub fn geometric_grid(t_min: f64, t_max: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![t_min];
    }
    let ratio = (t_max / t_min).ln() / (n - 1) as f64;
    (0..n).map(|i| t_min * (ratio * i as f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Rate;

    fn two_state() -> ReversibleChain {
        ReversibleChain::new(vec![0.5, 0.5], [Rate { x: 0, y: 1, rate: 1.0 }, Rate { x: 1, y: 0, rate: 1.0 }])
            .unwrap()
    }

    fn path_chain(n: usize) -> ReversibleChain {
        let pi: Vec<f64> = (0..n).map(|i| (i + 1) as f64).collect();
        let total: f64 = pi.iter().sum();
        let pi: Vec<f64> = pi.iter().map(|p| p / total).collect();
        let mut rates = Vec::new();
        for x in 0..n - 1 {
            // Metropolis-like rates reversible for pi.
            let q = pi[x].min(pi[x + 1]);
            rates.push(Rate { x, y: x + 1, rate: q / pi[x] });
            rates.push(Rate { x: x + 1, y: x, rate: q / pi[x + 1] });
        }
        ReversibleChain::new(pi, rates).unwrap()
    }

    #[test]
    fn empty_grid_is_rejected() {
        let c = two_state();
        assert_eq!(d_eta_envelope(&c, &ProbabilityVector::uniform(2), &[]), Err(ChainError::EmptyGrid));
    }

    #[test]
    fn stationary_start_has_zero_lower_side() {
        let c = path_chain(6);
        let eta = ProbabilityVector::new(c.pi().to_vec()).unwrap();
        let env = d_eta_envelope(&c, &eta, &geometric_grid(0.1, 10.0, 5)).unwrap();
        for (l, u) in env.lower.iter().zip(&env.upper) {
            assert!(*l < 1e-12);
            assert!(*u >= 0.0);
        }
    }

    #[test]
    fn point_mass_brackets_coincide() {
        let c = path_chain(7);
        let eta = ProbabilityVector::point_mass(7, 2);
        let env = d_eta_envelope(&c, &eta, &geometric_grid(0.05, 50.0, 12)).unwrap();
        for (l, u) in env.lower.iter().zip(&env.upper) {
            assert!((l - u).abs() < 1e-12);
        }
    }

    #[test]
    fn two_state_point_mass_is_exponential() {
        let c = two_state();
        let eta = ProbabilityVector::point_mass(2, 0);
        let grid = geometric_grid(0.01, 5.0, 9);
        let env = d_eta_envelope(&c, &eta, &grid).unwrap();
        for (t, u) in grid.iter().zip(&env.upper) {
            assert!((u - (-2.0 * t).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn running_sup_dominates_and_decreases() {
        let c = path_chain(5);
        let eta = ProbabilityVector::uniform(5);
        let env = d_eta_envelope(&c, &eta, &geometric_grid(0.01, 400.0, 30)).unwrap();
        for w in env.running_sup_upper.windows(2) {
            assert!(w[1] <= w[0]);
        }
        for i in 0..env.len() {
            assert!(env.running_sup_upper[i] >= env.upper[i]);
            assert!(env.lower[i] <= env.upper[i]);
        }
        assert!(*env.running_sup_upper.last().unwrap() < 1e-10);
    }

    #[test]
    fn local_search_stays_between_the_brackets() {
        let c = path_chain(8);
        let eta = ProbabilityVector::normalized((0..8).map(|i| 1.0 + (i % 3) as f64).collect()).unwrap();
        let plain = EnvelopeEngine::new(&c, &eta).unwrap();
        let searched = plain.clone().with_local_search(20);
        for &t in &[0.1, 0.7, 3.0] {
            let a = plain.evaluate(t).unwrap();
            let b = searched.evaluate(t).unwrap();
            assert!(b.lower >= a.lower - 1e-15);
            assert!(b.lower <= b.upper + 1e-15);
        }
    }
}
