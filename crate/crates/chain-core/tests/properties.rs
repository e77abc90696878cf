//! Property tests against independent oracles: dense matrix exponentials and
//! direct uniformization of point masses.

use chain_core::generate::random_reversible_chain;
use chain_core::{
    d_eta_envelope, evolve_distribution, geometric_grid, semigroup_apply, spectral_gap, tv_distance,
    ProbabilityVector, ReversibleChain,
};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn chain_for(seed: u64, n: usize) -> ReversibleChain {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_reversible_chain(n, 0.3, &mut rng)
}

fn generator_matrix(chain: &ReversibleChain) -> DMatrix<f64> {
    let n = chain.n();
    let mut l = DMatrix::zeros(n, n);
    for (x, y, r) in chain.directed_edges() {
        l[(x, y)] = r;
        l[(x, x)] -= r;
    }
    l
}

fn random_vector(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

fn centered(chain: &ReversibleChain, mut f: Vec<f64>) -> Vec<f64> {
    let m: f64 = f.iter().zip(chain.pi()).map(|(a, p)| a * p).sum();
    f.iter_mut().for_each(|a| *a -= m);
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn uniformization_matches_dense_exponential(seed in any::<u64>(), n in 2usize..=32) {
        let chain = chain_for(seed, n);
        let f = random_vector(seed, n);
        let l = generator_matrix(&chain);
        for &t in &[0.1, 1.0, 10.0] {
            let want = (&l * t).exp() * DVector::from_vec(f.clone());
            let got = semigroup_apply(&chain, &f, t).unwrap();
            let err = got.iter().zip(want.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            prop_assert!(err <= 1e-9, "t={} err={:e}", t, err);
        }
    }

    #[test]
    fn semigroup_contracts_and_preserves_the_mean(seed in any::<u64>(), n in 2usize..=24, t in 0.0f64..20.0) {
        let chain = chain_for(seed, n);
        let f = random_vector(seed, n);
        let pf = semigroup_apply(&chain, &f, t).unwrap();
        let sup = |v: &[f64]| v.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        prop_assert!(sup(&pf) <= sup(&f) + 1e-12);
        let mean = |v: &[f64]| v.iter().zip(chain.pi()).map(|(a, p)| a * p).sum::<f64>();
        prop_assert!((mean(&pf) - mean(&f)).abs() <= 1e-10);
    }

    #[test]
    fn l2_decay_at_the_gap_rate(seed in any::<u64>(), n in 2usize..=16, t in 0.0f64..8.0) {
        let chain = chain_for(seed, n);
        let gap = spectral_gap(&chain).unwrap().gap;
        let f = centered(&chain, random_vector(seed, n));
        let pf = semigroup_apply(&chain, &f, t).unwrap();
        let norm2 = |v: &[f64]| v.iter().zip(chain.pi()).map(|(a, p)| p * a * a).sum::<f64>();
        prop_assert!(norm2(&pf) <= (-2.0 * gap * t).exp() * norm2(&f) + 1e-9);
    }

    #[test]
    fn worst_case_tv_bound(seed in any::<u64>(), n in 2usize..=16, t in 0.0f64..8.0) {
        let chain = chain_for(seed, n);
        let gap = spectral_gap(&chain).unwrap().gap;
        let bound = (1.0 / chain.pi_min()).sqrt() * (-gap * t).exp();
        for x in 0..n {
            let law = evolve_distribution(&chain, &ProbabilityVector::point_mass(n, x).as_slice().to_vec(), t).unwrap();
            prop_assert!(tv_distance(&law, chain.pi()).unwrap() <= bound + 1e-9);
        }
    }

    #[test]
    fn gap_is_invariant_under_relabeling(seed in any::<u64>(), n in 2usize..=12) {
        let chain = chain_for(seed, n);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(7));
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let a = spectral_gap(&chain).unwrap();
        let b = spectral_gap(&chain.relabel(&perm).unwrap()).unwrap();
        prop_assert!((a.gap - b.gap).abs() <= 1e-10 * a.gap.max(1.0));
        prop_assert!(a.mean_under_pi.abs() < 1e-10);
    }

    #[test]
    fn dirichlet_form_is_symmetric(seed in any::<u64>(), n in 2usize..=16) {
        let chain = chain_for(seed, n);
        let f = random_vector(seed, n);
        let g = random_vector(seed.wrapping_add(1), n);
        let a = chain.dirichlet_form(&f, &g).unwrap();
        let b = chain.dirichlet_form(&g, &f).unwrap();
        prop_assert!((a - b).abs() <= 1e-14 * a.abs().max(1.0));
        prop_assert!(chain.dirichlet_form(&f, &f).unwrap() >= 0.0);
    }

    #[test]
    fn envelope_matches_uniformized_point_masses(seed in any::<u64>(), n in 2usize..=12) {
        let chain = chain_for(seed, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51);
        let eta = ProbabilityVector::normalized((0..n).map(|_| rng.random_range(0.0..1.0)).collect()).unwrap();
        let grid = geometric_grid(0.05, 20.0, 6);
        let env = d_eta_envelope(&chain, &eta, &grid).unwrap();
        for (i, &t) in grid.iter().enumerate() {
            let mut upper = 0.0;
            let mut mix = vec![0.0; n];
            for y in 0..n {
                let law = evolve_distribution(&chain, ProbabilityVector::point_mass(n, y).as_slice(), t).unwrap();
                upper += eta.as_slice()[y] * 2.0 * tv_distance(&law, chain.pi()).unwrap();
                mix.iter_mut().zip(&law).for_each(|(m, l)| *m += eta.as_slice()[y] * l);
            }
            let lower = 2.0 * tv_distance(&mix, chain.pi()).unwrap();
            prop_assert!((env.upper[i] - upper).abs() < 1e-9);
            prop_assert!((env.lower[i] - lower).abs() < 1e-9);
            prop_assert!(env.lower[i] <= env.upper[i]);
        }
    }
}

#[test]
fn built_chains_satisfy_detailed_balance() {
    for seed in 0..20 {
        let chain = chain_for(seed, 10);
        for (x, y, r) in chain.directed_edges() {
            let back = chain.rate(y, x);
            assert!((chain.pi()[x] * r - chain.pi()[y] * back).abs() <= 1e-12);
            assert_eq!(chain.conductance(x, y), chain.pi()[x] * r);
            assert!((chain.conductance(x, y) - chain.conductance(y, x)).abs() < 1e-15);
        }
    }
}
