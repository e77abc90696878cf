//! Decay and mixing-time bounds in terms of lower bounds on `L_eta(p')` and `L(p)`.
//!
//! Both expressions decrease in each constant, so plugging in lower bounds
//! keeps them valid upper bounds.

use crate::error::{BoundError, Result};
use crate::report::BoundReport;

fn check(l_eta: f64, l: f64, p: f64, p_prime: f64) -> Result<()> {
    if !(l_eta > 0.0 && l_eta.is_finite()) || !(l > 0.0 && l.is_finite()) {
        return Err(BoundError::NonPositiveInput(format!("constants must be positive: {l_eta}, {l}")));
    }
    for q in [p, p_prime] {
        if !(q > 0.0 && q <= 1.0) {
            return Err(BoundError::InvalidArgument(format!("exponent {q} outside (0, 1]")));
        }
    }
    Ok(())
}

/// `ln C_{p,p'}` with `C_{p,p'} = e^{-p'/2} (p/(2-p))^{pp'/(4-2p)}`.
pub fn log_c_pp(p: f64, p_prime: f64) -> f64 {
    -p_prime / 2.0 + p * p_prime / (4.0 - 2.0 * p) * (p / (2.0 - p)).ln()
}

/// `ln C~_p` with `C~_p = e^{-(2-p)/2} (p/(2-p))^{p/2}`.
pub fn log_ctilde(p: f64) -> f64 {
    -(2.0 - p) / 2.0 + p / 2.0 * (p / (2.0 - p)).ln()
}

/// `C_{p,p'} L_eta(p')^{-p'/2} L(p)^{-pp'/(4-2p)} t^{-p'/(2-p)}`.
pub fn decay_bound(l_eta_lower: f64, l_lower: f64, p: f64, p_prime: f64, t: f64) -> Result<BoundReport> {
    check(l_eta_lower, l_lower, p, p_prime)?;
    if !(t > 0.0) {
        return Err(BoundError::NonPositiveInput(format!("t = {t}")));
    }
    let log_value = log_c_pp(p, p_prime) - p_prime / 2.0 * l_eta_lower.ln()
        - p * p_prime / (4.0 - 2.0 * p) * l_lower.ln()
        - p_prime / (2.0 - p) * t.ln();
    Ok(BoundReport::from_log("decay_bound", log_value)
        .with_param("L_eta_lower", l_eta_lower)
        .with_param("L_lower", l_lower)
        .with_param("p", p)
        .with_param("p_prime", p_prime)
        .with_param("t", t))
}

/// `C~_p L_eta(p')^{-(2-p)/2} L(p)^{-p/2} eps^{-(2-p)/p'}`.
pub fn mixing_time_bound(l_eta_lower: f64, l_lower: f64, p: f64, p_prime: f64, epsilon: f64) -> Result<BoundReport> {
    check(l_eta_lower, l_lower, p, p_prime)?;
    if !(epsilon > 0.0) {
        return Err(BoundError::NonPositiveInput(format!("epsilon = {epsilon}")));
    }
    let log_value = log_ctilde(p) - (2.0 - p) / 2.0 * l_eta_lower.ln()
        - p / 2.0 * l_lower.ln()
        - (2.0 - p) / p_prime * epsilon.ln();
    Ok(BoundReport::from_log("mixing_time_bound", log_value)
        .with_param("L_eta_lower", l_eta_lower)
        .with_param("L_lower", l_lower)
        .with_param("p", p)
        .with_param("p_prime", p_prime)
        .with_param("epsilon", epsilon))
}

/// `((4-2p)/p)^{-p/(2-p)} (K t)^{-p/(2-p)} ||f||_inf^2`, the bound on `pi[(P_t f)^2]` for centered `f`.
pub fn step1_bound(k_lower: f64, p: f64, t: f64, sup_norm: f64) -> Result<f64> {
    if !(k_lower > 0.0) || !(t > 0.0) {
        return Err(BoundError::NonPositiveInput(format!("K = {k_lower}, t = {t}")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(BoundError::InvalidArgument(format!("p = {p} outside (0, 1]")));
    }
    let e = -p / (2.0 - p);
    Ok(((4.0 - 2.0 * p) / p).powf(e) * (k_lower * t).powf(e) * sup_norm * sup_norm)
}
