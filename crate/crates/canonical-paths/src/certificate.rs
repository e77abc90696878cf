//! Goodness summary of a selected family.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::GoodBadClassification;
use crate::select::PathFamily;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoodPathCertificate {
    pub n: usize,
    pub threshold: f64,
    pub bad_points: usize,
    pub ordered_pairs: usize,
    /// Pairs whose path has every interior point good.
    pub good_pairs: usize,
    pub fraction_good: f64,
    /// Pairs with a nonempty interior containing a bad point.
    pub bad_pairs_with_interior: usize,
    pub max_length: usize,
    pub all_good: bool,
    pub short_fallbacks: usize,
    pub composites: usize,
    /// Used edges whose endpoints are both bad.
    pub edges_with_two_bad_endpoints: usize,
}

/// Summarizes how many selected paths avoid bad interior points.
pub fn good_path_certificate(family: &PathFamily, class: &GoodBadClassification) -> GoodPathCertificate {
    let size = family.num_configurations();
    let per_x: Vec<(usize, usize, usize, Vec<(u32, u32)>)> = (0..size as u32)
        .into_par_iter()
        .map(|x| {
            let (mut good, mut bad_inner, mut max_len) = (0, 0, 0);
            let mut double_bad = Vec::new();
            for y in 0..size as u32 {
                if x == y {
                    continue;
                }
                let p = family.path(x, y);
                max_len = max_len.max(p.len());
                if p.interior().iter().all(|&v| class.is_good(v)) {
                    good += 1;
                } else {
                    bad_inner += 1;
                }
                for (a, b) in p.edges() {
                    if !class.is_good(a) && !class.is_good(b) {
                        double_bad.push((a.min(b), a.max(b)));
                    }
                }
            }
            (good, bad_inner, max_len, double_bad)
        })
        .collect();
    let ordered_pairs = size * (size - 1);
    let good_pairs: usize = per_x.iter().map(|r| r.0).sum();
    let mut double_bad: Vec<(u32, u32)> = per_x.iter().flat_map(|r| r.3.iter().copied()).collect();
    double_bad.sort_unstable();
    double_bad.dedup();
    GoodPathCertificate {
        n: family.n,
        threshold: class.threshold,
        bad_points: class.bad_count(),
        ordered_pairs,
        good_pairs,
        fraction_good: good_pairs as f64 / ordered_pairs as f64,
        bad_pairs_with_interior: per_x.iter().map(|r| r.1).sum(),
        max_length: per_x.iter().map(|r| r.2).max().unwrap_or(0),
        all_good: good_pairs == ordered_pairs,
        short_fallbacks: family.short_fallback_count(),
        composites: family.composite_count(),
        edges_with_two_bad_endpoints: double_bad.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify, ThresholdVariant};
    use crate::select::select_paths;

    #[test]
    fn all_good_energies() {
        let class = classify(&[0.0; 32], 5, 1.0, ThresholdVariant::Narrow).unwrap();
        let cert = good_path_certificate(&select_paths(&class).unwrap(), &class);
        assert_eq!(cert.fraction_good, 1.0);
        assert!(cert.all_good);
        assert_eq!(cert.max_length, 5);
    }

    #[test]
    fn all_bad_energies() {
        let class = classify(&[1e3; 32], 5, 1.0, ThresholdVariant::Narrow).unwrap();
        let cert = good_path_certificate(&select_paths(&class).unwrap(), &class);
        // Only paths of length one have empty interiors.
        assert_eq!(cert.good_pairs, 32 * 5);
        assert_eq!(cert.bad_pairs_with_interior, cert.ordered_pairs - 32 * 5);
        assert_eq!(cert.edges_with_two_bad_endpoints, 80);
    }
}
