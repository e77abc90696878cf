//! Defining ratios of the functional constants.
//!
//! For centered `f` (`pi(f) = 0`) and Dirichlet form `E = E(f,f)`:
//! * `L(p)     = E ||f||^{(2-2p)/p} / pi(|f|)^{2/p}`
//! * `L_eta(p) = E ||f||^{(2-2p)/p} / eta(|f|)^{2/p}`
//! * `K(p)     = E ||f||^{(4-2p)/p} / pi(f^2)^{2/p}`
//! * `Lambda(p)= E / pi(|f|^p)^{2/p}`
//! * `K2(p)    = E pi(f^2)^{(1-p)/(2p)} / pi(|f|)^{(p+1)/p}`
//!
//! Each constant is the infimum of its ratio, so any `f` yields an upper bound.

use chain_core::{ProbabilityVector, ReversibleChain};
use serde::{Deserialize, Serialize};

use crate::error::{BoundError, Result};

/// Tolerance on `|pi(f)|` relative to `||f||_inf`.
pub const CENTERING_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    L,
    LEta,
    K,
    Lambda,
    K2,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::L => "L",
            Family::LEta => "L_eta",
            Family::K => "K",
            Family::Lambda => "Lambda",
            Family::K2 => "K2",
        }
    }
}

fn sup_norm(f: &[f64]) -> f64 {
    f.iter().fold(0.0f64, |m, a| m.max(a.abs()))
}

/// The family's ratio at `f`.
///
/// `eta` is required for [`Family::LEta`] and ignored otherwise.
pub fn constant_ratio(
    chain: &ReversibleChain,
    family: Family,
    p: f64,
    f: &[f64],
    eta: Option<&ProbabilityVector>,
) -> Result<f64> {
    let max_p = if family == Family::Lambda { 2.0 } else { 1.0 };
    if !(p > 0.0 && p <= max_p) {
        return Err(BoundError::InvalidArgument(format!("p = {p} outside (0, {max_p}]")));
    }
    if f.len() != chain.n() {
        return Err(chain_core::ChainError::DimensionMismatch { expected: chain.n(), got: f.len() }.into());
    }
    let sup = sup_norm(f);
    if sup == 0.0 {
        return Err(BoundError::ZeroDenominator);
    }
    let pi = chain.pi();
    let mean: f64 = f.iter().zip(pi).map(|(a, w)| a * w).sum();
    if mean.abs() > CENTERING_TOLERANCE * sup {
        return Err(BoundError::NotCentered { mean });
    }
    let e = chain.dirichlet_form(f, f)?;
    let pi_abs: f64 = f.iter().zip(pi).map(|(a, w)| a.abs() * w).sum();
    let pi_sq: f64 = f.iter().zip(pi).map(|(a, w)| a * a * w).sum();
    let positive = |d: f64| if d > 0.0 { Ok(d) } else { Err(BoundError::ZeroDenominator) };
    let ratio = match family {
        Family::L => e * sup.powf((2.0 - 2.0 * p) / p) / positive(pi_abs)?.powf(2.0 / p),
        Family::LEta => {
            let eta = eta.ok_or_else(|| BoundError::InvalidArgument("L_eta needs eta".into()))?;
            if eta.len() != f.len() {
                return Err(chain_core::ChainError::DimensionMismatch { expected: f.len(), got: eta.len() }.into());
            }
            e * sup.powf((2.0 - 2.0 * p) / p) / positive(eta.mean_abs(f))?.powf(2.0 / p)
        }
        Family::K => e * sup.powf((4.0 - 2.0 * p) / p) / positive(pi_sq)?.powf(2.0 / p),
        Family::Lambda => {
            let m: f64 = f.iter().zip(pi).map(|(a, w)| a.abs().powf(p) * w).sum();
            e / positive(m)?.powf(2.0 / p)
        }
        Family::K2 => e * pi_sq.powf((1.0 - p) / (2.0 * p)) / positive(pi_abs)?.powf((p + 1.0) / p),
    };
    Ok(ratio)
}

/// Recenters `f` under `pi` and scales it to `||f||_inf = 1`; `None` if it vanishes.
pub fn normalize(f: &mut [f64], pi: &[f64]) -> Option<()> {
    let mean: f64 = f.iter().zip(pi).map(|(a, w)| a * w).sum();
    f.iter_mut().for_each(|a| *a -= mean);
    let sup = sup_norm(f);
    if sup == 0.0 || !sup.is_finite() {
        return None;
    }
    f.iter_mut().for_each(|a| *a /= sup);
    Some(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use chain_core::Rate;

    fn two_state() -> ReversibleChain {
        ReversibleChain::new(vec![0.5, 0.5], [Rate { x: 0, y: 1, rate: 1.0 }, Rate { x: 1, y: 0, rate: 1.0 }])
            .unwrap()
    }

    #[test]
    fn two_state_l_at_p_one() {
        let c = two_state();
        assert_eq!(constant_ratio(&c, Family::L, 1.0, &[1.0, -1.0], None).unwrap(), 2.0);
    }

    #[test]
    fn ratios_are_scale_invariant() {
        let c = two_state();
        let eta = ProbabilityVector::new(vec![0.3, 0.7]).unwrap();
        for fam in [Family::L, Family::LEta, Family::K, Family::Lambda, Family::K2] {
            for &p in &[0.3, 0.5, 1.0] {
                let a = constant_ratio(&c, fam, p, &[1.0, -1.0], Some(&eta)).unwrap();
                let b = constant_ratio(&c, fam, p, &[2.0, -2.0], Some(&eta)).unwrap();
                assert!((a - b).abs() < 1e-12 * a, "{fam:?} {p}");
            }
        }
    }

    #[test]
    fn l_eta_at_pi_is_l() {
        let c = two_state();
        let eta = ProbabilityVector::new(c.pi().to_vec()).unwrap();
        let a = constant_ratio(&c, Family::L, 0.4, &[1.0, -1.0], None).unwrap();
        let b = constant_ratio(&c, Family::LEta, 0.4, &[1.0, -1.0], Some(&eta)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn degenerate_inputs_are_flagged() {
        let c = two_state();
        assert_eq!(constant_ratio(&c, Family::L, 1.0, &[0.0, 0.0], None), Err(BoundError::ZeroDenominator));
        assert!(matches!(constant_ratio(&c, Family::L, 1.0, &[1.0, 0.0], None), Err(BoundError::NotCentered { .. })));
        let eta = ProbabilityVector::point_mass(2, 0);
        let three = ReversibleChain::new(
            vec![0.25, 0.5, 0.25],
            [
                Rate { x: 0, y: 1, rate: 1.0 },
                Rate { x: 1, y: 0, rate: 0.5 },
                Rate { x: 1, y: 2, rate: 0.5 },
                Rate { x: 2, y: 1, rate: 1.0 },
            ],
        )
        .unwrap();
        let eta3 = ProbabilityVector::point_mass(3, 1);
        assert_eq!(
            constant_ratio(&three, Family::LEta, 1.0, &[1.0, 0.0, -1.0], Some(&eta3)),
            Err(BoundError::ZeroDenominator)
        );
        assert!(constant_ratio(&c, Family::LEta, 1.0, &[1.0, -1.0], Some(&eta)).is_ok());
    }
}
