//! Versioned sweep configuration.

use canonical_paths::ThresholdVariant;
use rem_model::beta_c;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaUnits {
    /// Entries of `beta_list` are multiples of `beta_c`.
    #[default]
    BetaC,
    Absolute,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeedSpec {
    List(Vec<u64>),
    Range { start: u64, count: u64 },
}

impl SeedSpec {
    pub fn seeds(&self) -> Vec<u64> {
        match self {
            SeedSpec::List(v) => v.clone(),
            SeedSpec::Range { start, count } => (*start..start + count).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum ParameterSpec {
    #[default]
    ScalingRule,
    Manual { zeta: f64, rho: f64, p: f64, p_prime: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
    #[default]
    Both,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Output path; the extension is replaced by `.json` / `.csv`.
    pub path: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

fn one() -> f64 {
    1.0
}
fn default_cap() -> usize {
    12
}
fn default_rel_tol() -> f64 {
    1e-2
}
fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub n_list: Vec<usize>,
    pub beta_list: Vec<f64>,
    #[serde(default)]
    pub beta_units: BetaUnits,
    pub seeds: SeedSpec,
    pub epsilon: f64,
    #[serde(default = "one")]
    pub c: f64,
    #[serde(default = "one")]
    pub c1: f64,
    /// Good-point threshold constant.
    #[serde(default = "one")]
    pub c_e: f64,
    #[serde(default = "default_cap")]
    pub cap: usize,
    #[serde(default)]
    pub parameters: ParameterSpec,
    #[serde(default)]
    pub threshold_variant: ThresholdVariant,
    /// Compute path-based lower bounds and the resulting mixing-time bound.
    #[serde(default = "yes")]
    pub path_bounds: bool,
    /// Relative width target of the exact mixing-time bracket.
    #[serde(default = "default_rel_tol")]
    pub t_eta_rel_tol: f64,
    #[serde(default)]
    pub output: OutputSpec,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn betas(&self) -> Vec<f64> {
        let scale = match self.beta_units {
            BetaUnits::BetaC => beta_c(),
            BetaUnits::Absolute => 1.0,
        };
        self.beta_list.iter().map(|b| b * scale).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(CliError::Config(m));
        if self.schema_version != CONFIG_SCHEMA_VERSION {
            return fail(format!("schema_version {} (expected {CONFIG_SCHEMA_VERSION})", self.schema_version));
        }
        if self.n_list.is_empty() || self.beta_list.is_empty() || self.seeds.seeds().is_empty() {
            return fail("n_list, beta_list and seeds must be nonempty".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon < 2.0) {
            return fail(format!("epsilon = {} must lie in (0, 2)", self.epsilon));
        }
        if !(self.c > 0.0 && self.c1 > 0.0 && self.c_e > 0.0) {
            return fail("c, c1 and c_e must be positive".into());
        }
        if !(self.t_eta_rel_tol > 0.0) {
            return fail("t_eta_rel_tol must be positive".into());
        }
        if let Some(&n) = self.n_list.iter().find(|&&n| n < 2 || n > self.cap) {
            return fail(format!("N = {n} outside [2, cap = {}]", self.cap));
        }
        if self.cap > rem_model::DEFAULT_CAP {
            return fail(format!("cap = {} exceeds {}", self.cap, rem_model::DEFAULT_CAP));
        }
        if self.beta_list.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
            return fail("beta values must be finite and nonnegative".into());
        }
        match self.parameters {
            ParameterSpec::ScalingRule if self.beta_list.iter().any(|b| *b == 0.0) => {
                fail("the scaling rule needs beta > 0".into())
            }
            ParameterSpec::Manual { zeta, rho, p, p_prime }
                if !(zeta > 0.0 && rho > 0.0 && rho < 1.0 && p > 0.0 && p <= 1.0 && p_prime > 0.0 && p_prime <= 1.0) =>
            {
                fail("manual parameters need zeta > 0, rho in (0,1), p and p' in (0,1]".into())
            }
            _ => Ok(()),
        }
    }
}
