//! Subcommands. Each builds its JSON and CSV bytes and its verdicts; the
//! binary only writes them.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use canonical_paths::{classify, good_path_certificate, select_paths, ThresholdVariant};
use chain_core::{geometric_grid, spectral_gap, t_eta, ChainFile, ProbabilityVector, TEtaOptions};
use environment_view::{
    invariance_reversibility_check, random_cosines, shift_identity_check, t_av_estimate, SpinGroupElement, TAvOptions,
    TAvReport,
};
use poincare_bounds::{mixing_time_bound, path_bound_gap, path_bound_l_eta, ExplicitPaths, PathsFile, WeightAssignment};
use rayon::prelude::*;
use rem_model::{
    beta_c, closed_form_bounds, disorder_rng, lambda_weights, log_partition, metropolis_chain, occupation_profile,
    sample_instance, static_bounds_check, Constraint, ParameterChoice,
};
use serde::Serialize;

use crate::config::{ExperimentConfig, OutputFormat};
use crate::digest::sha256_hex;
use crate::error::{CliError, Result};
use crate::estimator::{t_n_estimator, TNEstimate};
use crate::output::{csv_bytes, json_bytes, write_outputs, Verdicts};
use crate::sweep::{run_sweep, SweepRecord};

/// Serialized result of one command.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub command: &'static str,
    pub input_digests: BTreeMap<String, String>,
    pub json: Vec<u8>,
    pub csv: Vec<u8>,
    pub verdicts: Verdicts,
}

impl CommandOutput {
    pub fn exit_code(&self) -> i32 {
        self.verdicts.exit_code()
    }

    /// Writes `<out>.json` and/or `<out>.csv`, or prints to stdout when `out` is `None`.
    pub fn emit(&self, out: Option<&Path>, format: OutputFormat) -> Result<Vec<PathBuf>> {
        match out {
            Some(base) => write_outputs(base, format, &self.json, &self.csv),
            None => {
                use std::io::Write;
                let bytes = if format == OutputFormat::Csv { &self.csv } else { &self.json };
                std::io::stdout().write_all(bytes)?;
                Ok(Vec::new())
            }
        }
    }
}

/// The digest stamped on CSV rows: the single input digest, or the SHA-256
/// of `name=digest` lines when there are several.
pub fn combined_digest(digests: &BTreeMap<String, String>) -> String {
    if digests.len() == 1 {
        return digests.values().next().cloned().unwrap_or_default();
    }
    let lines: String = digests.iter().map(|(k, v)| format!("{k}={v}\n")).collect();
    sha256_hex(lines.as_bytes())
}

fn finish<B: Serialize, R: Serialize>(
    command: &'static str,
    input_digests: BTreeMap<String, String>,
    body: &B,
    rows: &[R],
    verdicts: Verdicts,
) -> Result<CommandOutput> {
    let json = json_bytes(command, &input_digests, body, &verdicts)?;
    let csv = csv_bytes(rows, &combined_digest(&input_digests))?;
    Ok(CommandOutput { command, input_digests, json, csv, verdicts })
}

fn args_digest<A: Serialize>(args: &A) -> Result<BTreeMap<String, String>> {
    let mut d = BTreeMap::new();
    d.insert("args_sha256".to_string(), sha256_hex(&serde_json::to_vec(args)?));
    Ok(d)
}

fn energy_sha256(h: &[f64]) -> String {
    let bytes: Vec<u8> = h.iter().flat_map(|e| e.to_bits().to_le_bytes()).collect();
    sha256_hex(&bytes)
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// `0.75bc` means `0.75 beta_c`; a bare number is absolute.
pub fn parse_beta(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let (num, scale) = match s.strip_suffix("bc") {
        Some(x) => (x, beta_c()),
        None => (s, 1.0),
    };
    let v: f64 = num.trim().parse().map_err(|e| format!("beta '{s}': {e}"))?;
    if !(v.is_finite() && v >= 0.0) {
        return Err(format!("beta '{s}' must be finite and nonnegative"));
    }
    Ok(v * scale)
}

/// Seed list: `a..b` (end exclusive) or comma-separated values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SeedList(pub Vec<u64>);

pub fn parse_seeds(s: &str) -> std::result::Result<SeedList, String> {
    let s = s.trim();
    let seeds: Vec<u64> = if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|e| format!("seeds '{s}': {e}"))?;
        let b: u64 = b.trim().parse().map_err(|e| format!("seeds '{s}': {e}"))?;
        (a..b).collect()
    } else {
        s.split(',').map(|x| x.trim().parse().map_err(|e| format!("seeds '{s}': {e}"))).collect::<std::result::Result<_, _>>()?
    };
    if seeds.is_empty() {
        return Err(format!("seeds '{s}' is empty"));
    }
    Ok(SeedList(seeds))
}

/// Time grid: `geom:a:b:k` or comma-separated increasing times.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct TimeGrid(pub Vec<f64>);

pub fn parse_time_grid(s: &str) -> std::result::Result<TimeGrid, String> {
    let s = s.trim();
    let grid = if let Some(rest) = s.strip_prefix("geom:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("time grid '{s}' must read geom:a:b:k"));
        }
        let a: f64 = parts[0].parse().map_err(|e| format!("time grid '{s}': {e}"))?;
        let b: f64 = parts[1].parse().map_err(|e| format!("time grid '{s}': {e}"))?;
        let k: usize = parts[2].parse().map_err(|e| format!("time grid '{s}': {e}"))?;
        if !(a > 0.0 && b > a && k >= 2) {
            return Err(format!("time grid '{s}' needs 0 < a < b and k >= 2"));
        }
        geometric_grid(a, b, k)
    } else {
        s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| format!("time grid '{s}': {e}"))).collect::<std::result::Result<_, _>>()?
    };
    if grid.is_empty() || grid[0] < 0.0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(format!("time grid '{s}' must be nonnegative and increasing"));
    }
    Ok(TimeGrid(grid))
}

fn parse_variant(s: &str) -> std::result::Result<ThresholdVariant, String> {
    match s {
        "narrow" => Ok(ThresholdVariant::Narrow),
        "wide" => Ok(ThresholdVariant::Wide),
        _ => Err(format!("threshold variant '{s}' is not 'narrow' or 'wide'")),
    }
}

/// Where and how to write results; not part of the input digest.
#[derive(Debug, Clone, clap::Args)]
pub struct OutputArgs {
    /// Base path; `.json` and `.csv` replace its extension. Prints JSON when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Both)]
    pub format: OutputFormat,
}

/// Instance selection and parameter choice shared by `rem` and `env`.
#[derive(Debug, Clone, clap::Args, Serialize)]
pub struct ModelArgs {
    /// System sizes, comma-separated.
    #[arg(long = "N", value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Inverse temperatures, comma-separated; a `bc` suffix scales by beta_c.
    #[arg(long, value_delimiter = ',', value_parser = parse_beta, required = true)]
    pub beta: Vec<f64>,
    /// `a..b` or a comma list.
    #[arg(long, value_parser = parse_seeds)]
    pub seeds: SeedList,
    /// Depth `d`; sets `zeta = d/beta - 1`.
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub zeta: Option<f64>,
    #[arg(long, default_value_t = 0.75)]
    pub rho: f64,
    /// Defaults to `p/(1-p) = (2/3) beta^2 zeta^2 / (beta_c^2 + beta^2)`.
    #[arg(long)]
    pub p: Option<f64>,
    /// Defaults to `p`.
    #[arg(long = "p-prime")]
    pub p_prime: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c1: f64,
    /// Largest `N` for which the generator is built.
    #[arg(long, default_value_t = 12)]
    pub cap: usize,
}

impl ModelArgs {
    fn validate(&self) -> Result<()> {
        if self.n.iter().any(|&n| n < 2 || n > self.cap) {
            return Err(CliError::InvalidArgument(format!("every N must lie in [2, cap = {}]", self.cap)));
        }
        if self.cap > rem_model::DEFAULT_CAP {
            return Err(CliError::InvalidArgument(format!("cap exceeds {}", rem_model::DEFAULT_CAP)));
        }
        if self.zeta.is_some() && self.d.is_some() {
            return Err(CliError::InvalidArgument("give --zeta or --d, not both".into()));
        }
        if !(self.c > 0.0 && self.c1 > 0.0) {
            return Err(CliError::InvalidArgument("c and c1 must be positive".into()));
        }
        Ok(())
    }

    /// the scaling rule unless any of `zeta`, `d`, `rho`, `p`, `p'` is overridden.
    pub fn parameters(&self, n: usize, beta: f64) -> Result<ParameterChoice> {
        let overridden =
            self.zeta.is_some() || self.d.is_some() || self.p.is_some() || self.p_prime.is_some() || self.rho != 0.75;
        if !overridden {
            return Ok(ParameterChoice::scaling_rule(n, beta, self.c, self.c1)?);
        }
        let zeta = match (self.zeta, self.d) {
            (Some(z), _) => z,
            (None, Some(d)) if beta > 0.0 => d / beta - 1.0,
            (None, Some(_)) => return Err(CliError::InvalidArgument("--d needs beta > 0".into())),
            (None, None) => ParameterChoice::scaling_rule(n, beta, self.c, self.c1)?.zeta,
        };
        let bc = beta_c();
        let ratio = 2.0 / 3.0 * beta * beta / (bc * bc + beta * beta) * zeta * zeta;
        let p = self.p.unwrap_or(ratio / (1.0 + ratio));
        let p_prime = self.p_prime.unwrap_or(p);
        Ok(ParameterChoice::manual(n, beta, zeta, self.rho, p, p_prime, self.c, self.c1)?)
    }

    fn grid(&self) -> Vec<(usize, f64)> {
        let mut g: Vec<(usize, f64)> = self.n.iter().flat_map(|&n| self.beta.iter().map(move |&b| (n, b))).collect();
        g.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        g.dedup();
        g
    }

    fn seed_list(&self) -> Vec<u64> {
        let mut s = self.seeds.0.clone();
        s.sort_unstable();
        s.dedup();
        s
    }
}

// ---------------------------------------------------------------- rem

#[derive(Debug, Clone, clap::Args, Serialize)]
pub struct RemArgs {
    #[command(flatten)]
    pub model: ModelArgs,
}

/// Statics and spectral gap of one instance.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct RemRecord {
    pub n: usize,
    pub beta: f64,
    pub beta_over_beta_c: f64,
    pub seed: u64,
    pub energy_sha256: String,
    pub log_z: f64,
    pub free_energy: f64,
    pub gap: f64,
    pub gap_certified_lower: f64,
    /// `-(1/N) ln gap`.
    pub gap_rate: f64,
    pub param_mode: Option<String>,
    pub zeta: Option<f64>,
    pub d: Option<f64>,
    pub rho: Option<f64>,
    pub p: Option<f64>,
    pub p_prime: Option<f64>,
    pub admissible: Option<bool>,
    pub violations: String,
    /// Why no parameter choice exists, e.g. the scaling rule at `beta = 0`.
    pub parameter_note: Option<String>,
    pub log_lambda_weight: Option<f64>,
    pub deep_states: Option<usize>,
    /// Soft: every static inequality holds.
    pub static_all_hold: Option<bool>,
    pub static_failed: String,
    /// Hard: interval counts add up to `2^N`.
    pub sum_rule_holds: Option<bool>,
    pub brackets_checked: Option<usize>,
    /// Hard: the printed probability brackets hold.
    pub brackets_hold: Option<bool>,
    pub brackets_hold_with_density_factor: Option<bool>,
    pub log_inverse_l_pi_closed_form: Option<f64>,
    pub log_inverse_l_eta_closed_form: Option<f64>,
    pub error: Option<String>,
}

/// Median gap rate per `(N, beta)` against the limit `beta beta_c`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapSummary {
    pub n: usize,
    pub beta: f64,
    pub seeds: usize,
    pub median_gap_rate: f64,
    pub limit: f64,
    /// `beta sqrt(ln N / N)`.
    pub band_unit: f64,
}

fn rem_fill(a: &ModelArgs, rec: &mut RemRecord) -> Result<()> {
    let inst = sample_instance(rec.n, rec.beta, rec.seed)?;
    rec.energy_sha256 = energy_sha256(&inst.energies);
    let lz = log_partition(&inst, Constraint::None);
    rec.log_z = lz.log_value;
    rec.free_energy = lz.free_energy(rec.n);
    let gap = spectral_gap(&metropolis_chain(&inst, a.cap)?)?;
    rec.gap = gap.gap;
    rec.gap_certified_lower = gap.certified_lower;
    rec.gap_rate = -gap.gap.ln() / rec.n as f64;
    let choice = match a.parameters(rec.n, rec.beta) {
        Ok(c) => c,
        Err(e) => {
            rec.parameter_note = Some(e.to_string());
            return Ok(());
        }
    };
    rec.param_mode = Some(serde_json::to_value(choice.mode)?.as_str().unwrap_or_default().to_string());
    rec.zeta = Some(choice.zeta);
    rec.d = Some(choice.d);
    rec.rho = Some(choice.rho);
    rec.p = Some(choice.p);
    rec.p_prime = Some(choice.p_prime);
    rec.admissible = Some(choice.admissible());
    rec.violations = choice.violations.join("; ");
    let closed = closed_form_bounds(&choice);
    rec.log_inverse_l_pi_closed_form = Some(closed.log_inverse_l_pi);
    rec.log_inverse_l_eta_closed_form = Some(closed.log_inverse_l_eta);
    let w = lambda_weights(&inst, choice.d, choice.rho)?;
    rec.log_lambda_weight = Some(w.log_lambda);
    rec.deep_states = Some(w.deep_states);
    let statics = static_bounds_check(&inst, choice.d, a.c, a.c1)?;
    rec.static_all_hold = Some(statics.all_hold);
    let mut failed: Vec<String> = [
        &statics.low_partition,
        &statics.partition_lower,
        &statics.lambda_one,
        &statics.lambda_one_relaxed,
        &statics.lambda_eta,
    ]
    .iter()
    .filter(|i| !i.holds)
    .map(|i| i.name.clone())
    .collect();
    failed.extend(statics.subcube.iter().filter(|s| !s.inequality.holds).map(|s| format!("subcube j={}", s.j)));
    rec.static_failed = failed.join("; ");
    let occ = occupation_profile(&inst, choice.d, a.c, a.c1)?;
    rec.sum_rule_holds = Some(occ.sum_rule_holds);
    rec.brackets_checked = Some(occ.brackets.len());
    rec.brackets_hold = Some(occ.brackets.iter().all(|b| b.holds));
    rec.brackets_hold_with_density_factor = Some(occ.brackets.iter().all(|b| b.holds_with_density_factor));
    Ok(())
}

#[derive(Serialize)]
struct RemBody<'a> {
    args: &'a RemArgs,
    records: &'a [RemRecord],
    summaries: &'a [GapSummary],
}

pub fn rem_command(args: &RemArgs) -> Result<CommandOutput> {
    let a = &args.model;
    a.validate()?;
    let seeds = a.seed_list();
    let jobs: Vec<(usize, f64, u64)> =
        a.grid().into_iter().flat_map(|(n, b)| seeds.iter().map(move |&s| (n, b, s))).collect();
    let records: Vec<RemRecord> = jobs
        .into_par_iter()
        .map(|(n, beta, seed)| {
            let mut rec =
                RemRecord { n, beta, beta_over_beta_c: beta / beta_c(), seed, ..RemRecord::default() };
            if let Err(e) = rem_fill(a, &mut rec) {
                rec.error = Some(e.to_string());
            }
            rec
        })
        .collect();
    let summaries: Vec<GapSummary> = a
        .grid()
        .into_iter()
        .map(|(n, beta)| {
            let rates: Vec<f64> =
                records.iter().filter(|r| r.n == n && r.beta == beta && r.error.is_none()).map(|r| r.gap_rate).collect();
            let nf = n as f64;
            GapSummary {
                n,
                beta,
                seeds: rates.len(),
                median_gap_rate: median(rates),
                limit: beta * beta_c(),
                band_unit: beta * (nf.ln() / nf).sqrt(),
            }
        })
        .collect();
    let mut v = Verdicts::default();
    for r in &records {
        let tag = format!("N={} beta={} seed={}", r.n, r.beta, r.seed);
        if let Some(e) = &r.error {
            v.hard(false, format!("{tag}: {e}"));
        }
        v.hard(r.sum_rule_holds != Some(false), format!("{tag}: occupation sum rule fails"));
        v.hard(r.brackets_hold != Some(false), format!("{tag}: interval probability bracket fails"));
        v.soft(r.static_all_hold != Some(false), format!("{tag}: static bounds fail: {}", r.static_failed));
    }
    let body = RemBody { args, records: &records, summaries: &summaries };
    finish("rem", args_digest(args)?, &body, &records, v)
}

// ---------------------------------------------------------------- env

#[derive(Debug, Clone, clap::Args, Serialize)]
pub struct EnvArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    /// `geom:a:b:k` or a comma list of times.
    #[arg(long, value_parser = parse_time_grid, default_value = "geom:0.01:1e7:91")]
    pub tgrid: TimeGrid,
    /// Largest `N` for the exact shift, Markov and invariance checks.
    #[arg(long, default_value_t = 6)]
    pub check_max_n: usize,
}

/// Averaged mixing time and exact environment checks for one `(N, beta)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct EnvRecord {
    pub n: usize,
    pub beta: f64,
    pub beta_over_beta_c: f64,
    pub seeds: usize,
    pub epsilon: f64,
    pub t_av_upper: Option<f64>,
    pub t_av_upper_conservative: Option<f64>,
    pub log_rate: Option<f64>,
    pub limit_rate: f64,
    pub slack: f64,
    /// Soft: `log_rate <= beta^2 + slack`.
    pub trend_holds: Option<bool>,
    pub warnings: String,
    pub checked_seed: Option<u64>,
    pub shift_single_time: Option<f64>,
    pub shift_two_time: Option<f64>,
    pub markov: Option<f64>,
    pub invariance: Option<f64>,
    pub reversibility: Option<f64>,
    /// Hard: every exact discrepancy is within tolerance.
    pub checks_hold: Option<bool>,
    pub error: Option<String>,
}

fn env_checks(a: &EnvArgs, n: usize, beta: f64, seed: u64, rec: &mut EnvRecord) -> Result<()> {
    let inst = sample_instance(n, beta, seed)?;
    let functionals = random_cosines(n, 6, &mut disorder_rng(seed ^ 0x5eed, n));
    let sigma = SpinGroupElement((1u32 << n) - 1);
    let shift = shift_identity_check(&inst, sigma, 1.0, (0.5, 1.5), &functionals, a.model.cap)?;
    let inv = invariance_reversibility_check(&inst, 1.0, &functionals, a.model.cap)?;
    rec.checked_seed = Some(seed);
    rec.shift_single_time = Some(shift.single_time_discrepancy);
    rec.shift_two_time = Some(shift.two_time_discrepancy);
    rec.markov = Some(shift.markov_discrepancy);
    rec.invariance = Some(inv.invariance_discrepancy);
    rec.reversibility = Some(inv.reversibility_discrepancy);
    rec.checks_hold = Some(shift.holds && inv.holds);
    Ok(())
}

fn env_one(a: &EnvArgs, n: usize, beta: f64, seeds: &[u64]) -> (EnvRecord, Option<TAvReport>) {
    let mut rec = EnvRecord {
        n,
        beta,
        beta_over_beta_c: beta / beta_c(),
        seeds: seeds.len(),
        epsilon: a.epsilon,
        ..EnvRecord::default()
    };
    let opts = TAvOptions { epsilon: a.epsilon, time_grid: a.tgrid.0.clone(), cap: a.model.cap, c: a.model.c, c1: a.model.c1 };
    let report = match t_av_estimate(n, beta, seeds, &opts) {
        Ok(r) => r,
        Err(e) => {
            rec.error = Some(e.to_string());
            return (rec, None);
        }
    };
    rec.t_av_upper = report.t_av_upper;
    rec.t_av_upper_conservative = report.t_av_upper_conservative;
    rec.log_rate = report.log_rate;
    rec.limit_rate = report.limit_rate;
    rec.slack = report.slack;
    rec.trend_holds = report.trend_holds;
    rec.warnings = report.warnings.join("; ");
    if n <= a.check_max_n {
        if let Err(e) = env_checks(a, n, beta, seeds[0], &mut rec) {
            rec.error = Some(e.to_string());
        }
    }
    (rec, Some(report))
}

#[derive(Serialize)]
struct EnvBody<'a> {
    args: &'a EnvArgs,
    records: &'a [EnvRecord],
    reports: &'a [TAvReport],
}

pub fn env_command(args: &EnvArgs) -> Result<CommandOutput> {
    args.model.validate()?;
    if !(args.epsilon > 0.0) {
        return Err(CliError::InvalidArgument("epsilon must be positive".into()));
    }
    let seeds = args.model.seed_list();
    let (records, reports): (Vec<EnvRecord>, Vec<Option<TAvReport>>) =
        args.model.grid().into_iter().map(|(n, beta)| env_one(args, n, beta, &seeds)).unzip();
    let reports: Vec<TAvReport> = reports.into_iter().flatten().collect();
    let mut v = Verdicts::default();
    for r in &records {
        let tag = format!("N={} beta={}", r.n, r.beta);
        if let Some(e) = &r.error {
            v.hard(false, format!("{tag}: {e}"));
        }
        v.hard(r.checks_hold != Some(false), format!("{tag}: exact environment checks fail"));
        if r.error.is_none() {
            v.soft(r.trend_holds == Some(true), format!("{tag}: averaged mixing-time trend not confirmed"));
        }
    }
    let body = EnvBody { args, records: &records, reports: &reports };
    finish("env", args_digest(args)?, &body, &records, v)
}

// ---------------------------------------------------------------- paths

#[derive(Debug, Clone, clap::Args, Serialize)]
pub struct PathsArgs {
    #[arg(long = "N", value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    #[arg(long, value_parser = parse_seeds)]
    pub seeds: SeedList,
    /// Good-point threshold constant.
    #[arg(long = "c-e", default_value_t = 1.0)]
    pub c_e: f64,
    /// `narrow` or `wide`.
    #[arg(long, value_parser = parse_variant, default_value = "narrow")]
    pub variant: ThresholdVariant,
    /// Include every pair's flip sequence in the JSON output.
    #[arg(long)]
    pub emit_family: bool,
}

/// Goodness summary of the selected family for one instance.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct PathsRecord {
    pub n: usize,
    pub seed: u64,
    pub energy_sha256: String,
    pub c_e: f64,
    pub threshold: f64,
    pub bad_points: usize,
    pub ordered_pairs: usize,
    pub good_pairs: usize,
    pub fraction_good: f64,
    /// Hard: at most `N`.
    pub max_length: usize,
    /// Soft: every interior point of every path is good.
    pub all_good: bool,
    pub short_fallbacks: usize,
    pub composites: usize,
    pub edges_with_two_bad_endpoints: usize,
    pub error: Option<String>,
}

/// Flip sequence of the selected path for each ordered pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyDump {
    pub n: usize,
    pub seed: u64,
    /// `(x, y, sites flipped in order)`.
    pub pairs: Vec<(u32, u32, Vec<u8>)>,
}

fn paths_one(a: &PathsArgs, n: usize, seed: u64) -> Result<(PathsRecord, Option<FamilyDump>)> {
    let inst = sample_instance(n, 0.0, seed)?;
    let class = classify(&inst.energies, n, a.c_e, a.variant)?;
    let family = select_paths(&class)?;
    let cert = good_path_certificate(&family, &class);
    let rec = PathsRecord {
        n,
        seed,
        energy_sha256: energy_sha256(&inst.energies),
        c_e: a.c_e,
        threshold: cert.threshold,
        bad_points: cert.bad_points,
        ordered_pairs: cert.ordered_pairs,
        good_pairs: cert.good_pairs,
        fraction_good: cert.fraction_good,
        max_length: cert.max_length,
        all_good: cert.all_good,
        short_fallbacks: cert.short_fallbacks,
        composites: cert.composites,
        edges_with_two_bad_endpoints: cert.edges_with_two_bad_endpoints,
        error: None,
    };
    let dump = a.emit_family.then(|| {
        let size = 1u32 << n;
        let pairs = (0..size)
            .flat_map(|x| (0..size).filter(move |&y| y != x).map(move |y| (x, y)))
            .map(|(x, y)| (x, y, family.flip_sequence(x, y)))
            .collect();
        FamilyDump { n, seed, pairs }
    });
    Ok((rec, dump))
}

#[derive(Serialize)]
struct PathsBody<'a> {
    args: &'a PathsArgs,
    records: &'a [PathsRecord],
    #[serde(skip_serializing_if = "<[FamilyDump]>::is_empty")]
    families: &'a [FamilyDump],
}

pub fn paths_command(args: &PathsArgs) -> Result<CommandOutput> {
    if !(args.c_e > 0.0) {
        return Err(CliError::InvalidArgument("c_e must be positive".into()));
    }
    let mut ns = args.n.clone();
    ns.sort_unstable();
    ns.dedup();
    let mut seeds = args.seeds.0.clone();
    seeds.sort_unstable();
    seeds.dedup();
    let mut records = Vec::new();
    let mut families = Vec::new();
    for &n in &ns {
        for &seed in &seeds {
            match paths_one(args, n, seed) {
                Ok((rec, dump)) => {
                    records.push(rec);
                    families.extend(dump);
                }
                Err(e) => records.push(PathsRecord { n, seed, error: Some(e.to_string()), ..PathsRecord::default() }),
            }
        }
    }
    let mut v = Verdicts::default();
    for r in &records {
        let tag = format!("N={} seed={}", r.n, r.seed);
        if let Some(e) = &r.error {
            v.hard(false, format!("{tag}: {e}"));
            continue;
        }
        v.hard(r.max_length <= r.n, format!("{tag}: a selected path is longer than N"));
        v.soft(r.all_good, format!("{tag}: {} paths cross a bad point", r.ordered_pairs - r.good_pairs));
    }
    let body = PathsBody { args, records: &records, families: &families };
    finish("paths", args_digest(args)?, &body, &records, v)
}

// ---------------------------------------------------------------- bounds

#[derive(Debug, Clone, clap::Args, Serialize)]
pub struct BoundsArgs {
    /// Chain file `{n, pi, edges: [{x, y, rate_xy, rate_yx}]}`.
    #[arg(long)]
    pub chain: PathBuf,
    /// Paths file `{n, paths: [{x, y, vertices}]}`; shortest paths when absent.
    #[arg(long)]
    pub paths: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[arg(long = "p-prime", default_value_t = 1.0)]
    pub p_prime: f64,
    /// `uniform`, `pi` or `point:K`.
    #[arg(long, default_value = "uniform")]
    pub eta: String,
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub rel_tol: f64,
}

/// Path-based bounds against exact quantities for one chain.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct BoundsRecord {
    pub states: usize,
    pub p: f64,
    pub p_prime: f64,
    pub eta: String,
    pub epsilon: f64,
    pub gap: f64,
    pub inverse_gap: f64,
    /// Upper bound on `1/gap`.
    pub inverse_gap_path_bound: f64,
    pub log_inverse_l_pi_path: f64,
    pub log_inverse_l_eta_path: f64,
    pub log_t_bound: f64,
    pub t_eta_lower: f64,
    pub t_eta_upper: f64,
    pub t_eta_converged: bool,
    /// Hard: `inverse_gap_path_bound >= 1/gap`.
    pub verdict_gap_bound: bool,
    /// Hard: `t_eta_lower <= exp(log_t_bound)`.
    pub verdict_mixing_bound: bool,
}

fn parse_eta(spec: &str, pi: &[f64]) -> Result<ProbabilityVector> {
    let n = pi.len();
    match spec {
        "uniform" => Ok(ProbabilityVector::uniform(n)),
        "pi" => Ok(ProbabilityVector::normalized(pi.to_vec())?),
        s => match s.strip_prefix("point:").and_then(|k| k.parse::<usize>().ok()) {
            Some(k) if k < n => Ok(ProbabilityVector::point_mass(n, k)),
            _ => Err(CliError::InvalidArgument(format!("eta '{s}' is not uniform, pi or point:K with K < {n}"))),
        },
    }
}

#[derive(Serialize)]
struct BoundsBody<'a> {
    args: &'a BoundsArgs,
    records: &'a [BoundsRecord],
}

/// Bounds for a chain given as JSON text, with optional paths JSON text.
pub fn bounds_from_text(args: &BoundsArgs, chain_text: &str, paths_text: Option<&str>) -> Result<CommandOutput> {
    let chain = ChainFile::from_json(chain_text)?.to_chain()?;
    let paths = match paths_text {
        Some(t) => {
            let file: PathsFile = serde_json::from_str(t)?;
            ExplicitPaths::from_records(&chain, &file.paths)?
        }
        None => ExplicitPaths::shortest_paths(&chain),
    };
    let n = chain.n();
    let eta = parse_eta(&args.eta, chain.pi())?;
    let pi = ProbabilityVector::normalized(chain.pi().to_vec())?;
    let unit = WeightAssignment::unit(n);
    let gap = spectral_gap(&chain)?.gap;
    let gap_bound = path_bound_gap(&chain, &paths)?;
    let l_pi = path_bound_l_eta(&chain, &paths, &unit, args.p, &pi)?.log_value;
    let l_eta = path_bound_l_eta(&chain, &paths, &unit, args.p_prime, &eta)?.log_value;
    let bound = mixing_time_bound((-l_eta).exp(), (-l_pi).exp(), args.p, args.p_prime, args.epsilon)?;
    let opts = TEtaOptions { rel_tol: args.rel_tol, ..TEtaOptions::default() };
    let bracket = t_eta(&chain, &eta, args.epsilon, &opts)?;
    let t_lo_log = if bracket.t_lo > 0.0 { bracket.t_lo.ln() } else { f64::NEG_INFINITY };
    let rec = BoundsRecord {
        states: n,
        p: args.p,
        p_prime: args.p_prime,
        eta: args.eta.clone(),
        epsilon: args.epsilon,
        gap,
        inverse_gap: 1.0 / gap,
        inverse_gap_path_bound: gap_bound.value,
        log_inverse_l_pi_path: l_pi,
        log_inverse_l_eta_path: l_eta,
        log_t_bound: bound.log_value,
        t_eta_lower: bracket.t_lo,
        t_eta_upper: bracket.t_hi,
        t_eta_converged: bracket.converged,
        verdict_gap_bound: gap_bound.value * (1.0 + 1e-9) >= 1.0 / gap,
        verdict_mixing_bound: t_lo_log <= bound.log_value + 1e-12 * bound.log_value.abs(),
    };
    let mut v = Verdicts::default();
    v.hard(rec.verdict_gap_bound, "path bound on 1/gap is below 1/gap");
    v.hard(rec.verdict_mixing_bound, "exact mixing time exceeds the mixing-time bound");
    let mut digests = args_digest(args)?;
    digests.insert("chain_sha256".into(), sha256_hex(chain_text.as_bytes()));
    if let Some(t) = paths_text {
        digests.insert("paths_sha256".into(), sha256_hex(t.as_bytes()));
    }
    let records = [rec];
    // File paths are not inputs; only their contents are digested.
    let mut echoed = args.clone();
    echoed.chain = PathBuf::from(Path::new(&args.chain).file_name().unwrap_or_default());
    echoed.paths = args.paths.as_ref().map(|p| PathBuf::from(p.file_name().unwrap_or_default()));
    finish("bounds", digests, &BoundsBody { args: &echoed, records: &records }, &records, v)
}

pub fn bounds_command(args: &BoundsArgs) -> Result<CommandOutput> {
    let chain_text = std::fs::read_to_string(&args.chain)?;
    let paths_text = args.paths.as_ref().map(std::fs::read_to_string).transpose()?;
    bounds_from_text(args, &chain_text, paths_text.as_deref())
}

// ---------------------------------------------------------------- sweep

/// A `(N, beta)` group that the estimator skipped.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepNote {
    pub n: usize,
    pub beta: f64,
    pub note: String,
}

#[derive(Serialize)]
struct SweepBody<'a> {
    config: &'a ExperimentConfig,
    records: &'a [SweepRecord],
    estimates: &'a [TNEstimate],
    notes: &'a [SweepNote],
}

/// Runs a sweep from the config text; the digest covers the exact bytes.
pub fn sweep_from_text(text: &str) -> Result<(ExperimentConfig, CommandOutput)> {
    let cfg = ExperimentConfig::from_json(text)?;
    let records = run_sweep(&cfg)?;
    let mut estimates = Vec::new();
    let mut notes = Vec::new();
    let mut keys: Vec<(usize, f64)> = records.iter().map(|r| (r.n, r.beta)).collect();
    keys.dedup();
    for (n, beta) in keys {
        let group: Vec<SweepRecord> = records.iter().filter(|r| r.n == n && r.beta == beta).cloned().collect();
        match t_n_estimator(&group, cfg.epsilon, cfg.c, cfg.c1) {
            Ok(mut e) => estimates.append(&mut e),
            Err(e @ CliError::InsufficientSeeds { .. }) => notes.push(SweepNote { n, beta, note: e.to_string() }),
            Err(e) => return Err(e),
        }
    }
    let mut v = Verdicts::default();
    for r in &records {
        v.hard_failures.extend(r.hard_failures());
        v.soft_failures.extend(r.soft_failures());
    }
    for e in &estimates {
        let tag = format!("N={} beta={}", e.n, e.beta);
        v.soft(e.trend_holds, format!("{tag}: T_N growth exceeds beta^2 plus slack"));
        v.soft(e.median_separation, format!("{tag}: median mixing time is not below the median relaxation time"));
    }
    let mut digests = BTreeMap::new();
    digests.insert("config_sha256".to_string(), sha256_hex(text.as_bytes()));
    let body = SweepBody { config: &cfg, records: &records, estimates: &estimates, notes: &notes };
    let out = finish("sweep", digests, &body, &records, v)?;
    Ok((cfg, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_suffix_scales_by_beta_c() {
        assert!((parse_beta("0.75bc").unwrap() - 0.75 * beta_c()).abs() < 1e-15);
        assert_eq!(parse_beta("0.3").unwrap(), 0.3);
        assert!(parse_beta("-1").is_err());
    }

    #[test]
    fn seed_forms() {
        assert_eq!(parse_seeds("2..5").unwrap().0, vec![2, 3, 4]);
        assert_eq!(parse_seeds("7, 1").unwrap().0, vec![7, 1]);
        assert!(parse_seeds("3..3").is_err());
    }

    #[test]
    fn time_grids() {
        let g = parse_time_grid("geom:0.1:10:3").unwrap().0;
        assert!((g[1] - 1.0).abs() < 1e-12);
        assert_eq!(parse_time_grid("0,1,2").unwrap().0, vec![0.0, 1.0, 2.0]);
        assert!(parse_time_grid("1,1").is_err());
    }

    fn model(n: usize) -> ModelArgs {
        ModelArgs {
            n: vec![n],
            beta: vec![0.5 * beta_c()],
            seeds: SeedList(vec![0]),
            d: None,
            zeta: None,
            rho: 0.75,
            p: None,
            p_prime: None,
            c: 1.0,
            c1: 1.0,
            cap: 12,
        }
    }

    #[test]
    fn depth_override_sets_zeta() {
        let mut a = model(8);
        a.d = Some(1.5 * a.beta[0]);
        let ch = a.parameters(8, a.beta[0]).unwrap();
        assert!((ch.zeta - 0.5).abs() < 1e-12 && (ch.d - a.d.unwrap()).abs() < 1e-12);
        assert_eq!(ch.p, ch.p_prime);
    }

    #[test]
    fn scaling_rule_by_default() {
        let a = model(8);
        assert_eq!(a.parameters(8, a.beta[0]).unwrap(), ParameterChoice::scaling_rule(8, a.beta[0], 1.0, 1.0).unwrap());
    }

    #[test]
    fn combined_digest_of_one_is_itself() {
        let mut d = BTreeMap::new();
        d.insert("a".to_string(), "x".to_string());
        assert_eq!(combined_digest(&d), "x");
        d.insert("b".to_string(), "y".to_string());
        assert_eq!(combined_digest(&d), sha256_hex(b"a=x\nb=y\n"));
    }
}
