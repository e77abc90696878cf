//! Partition functions in the log domain.

use serde::{Deserialize, Serialize};

use crate::error::{RemError, Result};
use crate::instance::RemInstance;

/// Natural log of a sum of positive terms; `is_empty` marks an empty sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogPartition {
    /// `-inf` exactly when `is_empty`.
    pub log_value: f64,
    pub is_empty: bool,
}

impl LogPartition {
    pub fn from_log_terms(terms: impl IntoIterator<Item = f64>) -> Self {
        let terms: Vec<f64> = terms.into_iter().collect();
        let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if terms.is_empty() || m == f64::NEG_INFINITY {
            return Self { log_value: f64::NEG_INFINITY, is_empty: true };
        }
        let s: f64 = terms.iter().map(|t| (t - m).exp()).sum();
        Self { log_value: m + s.ln(), is_empty: false }
    }

    /// Free energy `(1/N) ln Z`.
    pub fn free_energy(&self, n: usize) -> f64 {
        self.log_value / n as f64
    }
}

/// Energy window of a constrained sum.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constraint {
    #[default]
    None,
    /// `H <= -d N`.
    AtMost { d: f64 },
    /// `H >= -d N`.
    AtLeast { d: f64 },
}

impl Constraint {
    pub fn admits(&self, h: f64, n: usize) -> bool {
        match *self {
            Constraint::None => true,
            Constraint::AtMost { d } => h <= -d * n as f64,
            Constraint::AtLeast { d } => h >= -d * n as f64,
        }
    }
}

/// `ln sum_{sigma admitted} e^{-beta H(sigma)}`.
pub fn log_partition(inst: &RemInstance, constraint: Constraint) -> LogPartition {
    LogPartition::from_log_terms(
        inst.energies.iter().filter(|&&h| constraint.admits(h, inst.n)).map(|&h| -inst.beta * h),
    )
}

/// Clamped spins: sites in `mask` take the bits of `values`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FixedSpins {
    pub mask: u32,
    pub values: u32,
}

impl FixedSpins {
    pub fn free() -> Self {
        Self::default()
    }

    /// Clamps sites `from..n` to the bits of `z`.
    pub fn high_sites(n: usize, from: usize, z: u32) -> Self {
        let mask = ((1u64 << n) - 1) as u32 & !((1u64 << from) - 1) as u32;
        Self { mask, values: z & mask }
    }

    /// Clamps sites `0..to` to the bits of `z`.
    pub fn low_sites(to: usize, z: u32) -> Self {
        let mask = ((1u64 << to) - 1) as u32;
        Self { mask, values: z & mask }
    }

    pub fn contains(&self, sigma: u32) -> bool {
        sigma & self.mask == self.values
    }
}

/// Constrained sum over the sub-cube of configurations agreeing with `fixed`.
pub fn subcube_partition(inst: &RemInstance, fixed: FixedSpins, constraint: Constraint) -> Result<LogPartition> {
    let full = ((1u64 << inst.n) - 1) as u32;
    if fixed.mask & !full != 0 || fixed.values & !fixed.mask != 0 {
        return Err(RemError::InvalidArgument(format!("fixed spins {:?} outside N = {}", fixed, inst.n)));
    }
    let free = !fixed.mask & full;
    // Enumerate the free sub-cube by the subset trick.
    let mut terms = Vec::with_capacity(1 << free.count_ones());
    let mut sub = 0u32;
    loop {
        let h = inst.energies[(fixed.values | sub) as usize];
        if constraint.admits(h, inst.n) {
            terms.push(-inst.beta * h);
        }
        if sub == free {
            break;
        }
        sub = (sub.wrapping_sub(free)) & free;
    }
    Ok(LogPartition::from_log_terms(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::sample_instance;

    #[test]
    fn infinite_temperature_counts_configurations() {
        let inst = sample_instance(10, 0.0, 3).unwrap();
        assert!((log_partition(&inst, Constraint::None).log_value - 10.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn constant_energy() {
        let inst = RemInstance::from_energies(6, 0.7, vec![1.5; 64]).unwrap();
        let want = 6.0 * 2f64.ln() - 0.7 * 1.5;
        assert!((log_partition(&inst, Constraint::None).log_value - want).abs() < 1e-12);
    }

    #[test]
    fn empty_constraint_is_flagged() {
        let inst = RemInstance::from_energies(3, 1.0, vec![0.0; 8]).unwrap();
        let z = log_partition(&inst, Constraint::AtMost { d: 1.0 });
        assert!(z.is_empty);
        assert_eq!(z.log_value, f64::NEG_INFINITY);
    }

    #[test]
    fn subcube_extremes() {
        let inst = sample_instance(8, 1.2, 5).unwrap();
        let c = Constraint::AtLeast { d: 0.3 };
        let z = 0b1011_0110u32;
        let all = subcube_partition(&inst, FixedSpins { mask: 0xff, values: z }, c).unwrap();
        let h = inst.energies[z as usize];
        if c.admits(h, 8) {
            assert!((all.log_value + 1.2 * h).abs() < 1e-14);
        } else {
            assert!(all.is_empty);
        }
        let none = subcube_partition(&inst, FixedSpins::free(), c).unwrap();
        assert_eq!(none, log_partition(&inst, c));
    }

    #[test]
    fn subcube_enumerates_free_sites() {
        let inst = sample_instance(8, 0.9, 11).unwrap();
        let fixed = FixedSpins::high_sites(8, 3, 0b1010_1000);
        let direct: f64 = (0..8u32).map(|x| (-0.9 * inst.energies[(0b1010_1000 | x) as usize]).exp()).sum();
        let z = subcube_partition(&inst, fixed, Constraint::None).unwrap();
        assert!((z.log_value - direct.ln()).abs() < 1e-13);
    }
}
