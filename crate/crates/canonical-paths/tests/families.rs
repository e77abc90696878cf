//! Structural properties of cyclic paths and selected families.

use canonical_paths::{
    classify, cyclic_flip_path, good_path_certificate, hamming, interior_disjointness_check, select_paths,
    PathFamily, PathKind, ThresholdVariant,
};
use chain_core::{spectral_gap, Rate, ReversibleChain};
use poincare_bounds::{path_bound_gap, PathSystem};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn gaussian_energies(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, (n as f64).sqrt()).unwrap();
    (0..1usize << n).map(|_| normal.sample(&mut rng)).collect()
}

fn family(n: usize, seed: u64) -> PathFamily {
    let class = classify(&gaussian_energies(n, seed), n, 1.0, ThresholdVariant::Narrow).unwrap();
    select_paths(&class).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cyclic_paths_flip_one_spin_per_step(n in 1usize..=12, a in any::<u32>(), b in any::<u32>(), start in 0usize..12) {
        let mask = (1u32 << n) - 1;
        let (x, y) = (a & mask, b & mask);
        let p = cyclic_flip_path(n, x, y, start % n);
        prop_assert_eq!(p.len(), hamming(x, y));
        prop_assert_eq!(p.vertices[0], x);
        prop_assert_eq!(*p.vertices.last().unwrap(), y);
        for (u, v) in p.edges() {
            prop_assert_eq!((u ^ v).count_ones(), 1);
        }
        prop_assert!(p.is_self_avoiding());
    }

    #[test]
    fn sampled_interiors_are_disjoint(n in 7usize..=12, a in any::<u32>(), b in any::<u32>()) {
        let mask = (1u32 << n) - 1;
        prop_assert!(interior_disjointness_check(n, a & mask, b & mask));
    }
}

#[test]
fn exhaustive_interior_disjointness() {
    for n in 1..=6 {
        for x in 0..1u32 << n {
            for y in 0..1u32 << n {
                assert!(interior_disjointness_check(n, x, y), "n={n} x={x} y={y}");
            }
        }
    }
}

#[test]
fn selection_is_deterministic() {
    let a = serde_json::to_vec(&family(8, 11)).unwrap();
    let b = serde_json::to_vec(&family(8, 11)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn selected_paths_are_short_and_consistent() {
    for (n, seed) in [(6, 1), (8, 2), (9, 3)] {
        let fam = family(n, seed);
        for x in 0..1u32 << n {
            for y in 0..1u32 << n {
                let p = fam.path(x, y);
                assert!(p.len() <= n);
                assert_eq!(p.vertices[0], x);
                assert_eq!(*p.vertices.last().unwrap(), y);
                let mut visited = vec![x as usize];
                let ok = fam.for_each_edge(x as usize, y as usize, |u, v| {
                    assert_eq!(*visited.last().unwrap(), u);
                    visited.push(v);
                });
                assert_eq!(ok, x != y);
                if x != y {
                    assert_eq!(visited, p.vertices.iter().map(|&v| v as usize).collect::<Vec<_>>());
                }
                if let PathKind::Composite { .. } = fam.kind(x, y) {
                    assert!(p.is_self_avoiding());
                }
            }
        }
    }
}

#[test]
fn bad_fraction_matches_the_gaussian_tail() {
    let n = 8;
    let seeds = 200;
    let mut bad = 0usize;
    let mut threshold = 0.0;
    for seed in 0..seeds {
        let class = classify(&gaussian_energies(n, 1000 + seed), n, 1.0, ThresholdVariant::Narrow).unwrap();
        bad += class.bad_count();
        threshold = class.threshold;
    }
    let total = (seeds as usize * (1 << n)) as f64;
    let tail = 0.5 * libm::erfc(threshold / (2.0 * n as f64).sqrt());
    let sd = (tail * (1.0 - tail) / total).sqrt();
    let freq = bad as f64 / total;
    assert!((freq - tail).abs() < 4.0 * sd, "freq {freq} tail {tail} sd {sd}");
}

#[test]
fn family_gap_bound_dominates_hypercube_relaxation() {
    let n = 6;
    let fam = family(n, 5);
    let size = 1usize << n;
    let rates = (0..size).flat_map(|x| (0..n).map(move |s| Rate { x, y: x ^ (1 << s), rate: 1.0 / n as f64 }));
    let chain = ReversibleChain::new(vec![1.0 / size as f64; size], rates).unwrap();
    let gap = spectral_gap(&chain).unwrap().gap;
    assert!((gap - 2.0 / n as f64).abs() < 1e-10);
    assert!(path_bound_gap(&chain, &fam).unwrap().value >= 1.0 / gap);
}

#[test]
fn certificate_counts_pairs() {
    let n = 7;
    let fam = family(n, 9);
    let class = classify(&gaussian_energies(n, 9), n, 1.0, ThresholdVariant::Narrow).unwrap();
    let cert = good_path_certificate(&fam, &class);
    assert_eq!(cert.good_pairs + cert.bad_pairs_with_interior, cert.ordered_pairs);
    assert!(cert.max_length <= n);
}
