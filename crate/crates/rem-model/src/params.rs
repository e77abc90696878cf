//! Parameter choices for the weighted path bounds and their closed-form estimates.

use serde::{Deserialize, Serialize};

use crate::error::{RemError, Result};
use crate::instance::beta_c;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParameterMode {
    Manual,
    ScalingRule,
}

/// `zeta`, `d = beta (1 + zeta)`, `rho`, `p`, `p'` and the constants they depend on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterChoice {
    pub mode: ParameterMode,
    pub n: usize,
    pub beta: f64,
    pub zeta: f64,
    pub d: f64,
    pub rho: f64,
    pub p: f64,
    pub p_prime: f64,
    pub c: f64,
    pub c1: f64,
    /// Conditions of the closed-form estimates that fail at this `N`.
    pub violations: Vec<String>,
}

impl ParameterChoice {
    pub fn admissible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn manual(n: usize, beta: f64, zeta: f64, rho: f64, p: f64, p_prime: f64, c: f64, c1: f64) -> Result<Self> {
        if !(zeta > 0.0 && rho > 0.0 && rho < 1.0 && p > 0.0 && p <= 1.0 && p_prime > 0.0 && p_prime <= 1.0) {
            return Err(RemError::InvalidArgument(format!(
                "need zeta > 0, rho in (0,1), p and p' in (0,1]; got {zeta}, {rho}, {p}, {p_prime}"
            )));
        }
        let mut choice = Self {
            mode: ParameterMode::Manual,
            n,
            beta,
            zeta,
            d: beta * (1.0 + zeta),
            rho,
            p,
            p_prime,
            c,
            c1,
            violations: Vec::new(),
        };
        choice.violations = choice.check();
        Ok(choice)
    }

    /// `zeta^2 = 12 (beta_c/beta) sqrt(c1 (1+c) ln N / N)`, `rho = 3/4`,
    /// `p/(1-p) = (2/3) beta^2/(beta_c^2 + beta^2) zeta^2`, `p' = p`.
    pub fn scaling_rule(n: usize, beta: f64, c: f64, c1: f64) -> Result<Self> {
        if !(beta > 0.0) || n < 2 || !(c > 0.0 && c1 > 0.0) {
            return Err(RemError::InvalidArgument(format!(
                "scaling rule needs beta > 0, N >= 2, c, c1 > 0; got beta = {beta}, N = {n}"
            )));
        }
        let bc = beta_c();
        let nf = n as f64;
        let zeta2 = 12.0 * bc / beta * (c1 * (1.0 + c) * nf.ln() / nf).sqrt();
        let ratio = 2.0 / 3.0 * beta * beta / (bc * bc + beta * beta) * zeta2;
        let p = ratio / (1.0 + ratio);
        let mut choice = Self::manual(n, beta, zeta2.sqrt(), 0.75, p, p, c, c1)?;
        choice.mode = ParameterMode::ScalingRule;
        Ok(choice)
    }

    fn check(&self) -> Vec<String> {
        let bc = beta_c();
        let nf = self.n as f64;
        let (beta, zeta, p, rho) = (self.beta, self.zeta, self.p, self.rho);
        let mut v = Vec::new();
        if beta >= bc {
            v.push(format!("beta = {beta} is not below beta_c"));
        } else if zeta > (bc - beta) / beta {
            v.push(format!("zeta = {zeta} exceeds (beta_c - beta)/beta = {}", (bc - beta) / beta));
        }
        if p >= 0.5 {
            v.push(format!("p = {p} is not below 1/2"));
        }
        let lhs = p * rho / (zeta * zeta * (1.0 - p));
        if p < 1.0 && lhs > 0.5 * beta * beta / (beta * beta + bc * bc) * (1.0 + 1e-12) {
            v.push(format!("p rho / (zeta^2 (1-p)) = {lhs} exceeds beta^2 / (2 (beta^2 + beta_c^2))"));
        }
        let size = (nf / ((1.0 + self.c) * nf.ln())).sqrt();
        let need = 12.0 * bc / (zeta * zeta * beta) * self.c1.sqrt();
        if size < need * (1.0 - 1e-12) {
            v.push(format!("sqrt(N / ((1+c) ln N)) = {size} is below 12 beta_c sqrt(c1) / (zeta^2 beta) = {need}"));
        }
        if 2.0 * (1.0 - rho) >= 1.0 {
            v.push(format!("2 (1 - rho) = {} is not below 1", 2.0 * (1.0 - rho)));
        }
        v
    }
}

/// Closed-form estimates of `ln(1/L_pi(p))` and `ln(1/L_eta(p))` for uniform `eta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormBounds {
    /// `ln[4^{(1-3p+p^2)/(p(1-p))} 22 N^4 e^{2 beta beta_c s} e^{beta^2 (1+zeta) N}]`, `s = sqrt(c1 (1+c) N ln N)`.
    pub log_inverse_l_pi: f64,
    /// `ln[4^{(2-3p+2p^2)/(p(1-p))} 4 N^2 e^{4 beta beta_c s} e^{beta^2 (1+zeta) N}]`.
    pub log_inverse_l_eta: f64,
}

pub fn closed_form_bounds(choice: &ParameterChoice) -> ClosedFormBounds {
    let nf = choice.n as f64;
    let (p, beta) = (choice.p, choice.beta);
    let s = (choice.c1 * (1.0 + choice.c) * nf * nf.ln()).sqrt();
    let bb = beta * beta_c() * s;
    let tail = beta * beta * (1.0 + choice.zeta) * nf;
    let ln4 = 4f64.ln();
    let q = p * (1.0 - p);
    ClosedFormBounds {
        log_inverse_l_pi: (1.0 - 3.0 * p + p * p) / q * ln4 + 22f64.ln() + 4.0 * nf.ln() + 2.0 * bb + tail,
        log_inverse_l_eta: (2.0 - 3.0 * p + 2.0 * p * p) / q * ln4 + 4f64.ln() + 2.0 * nf.ln() + 4.0 * bb + tail,
    }
}
