//! Group action, orbit laws, exact identity checks and the averaged mixing time.

use environment_view::{
    act, evaluation_basis, invariance_reversibility_check, nu_measure, random_cosines, shift_identity_check,
    sigma_independence, t_av_estimate, SpinGroupElement, TAvOptions, TestFunctional,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rem_model::{beta_c, gibbs_measure, sample_instance, RemInstance};

proptest! {
    #[test]
    fn action_is_a_composing_involutive_permutation(
        n in 1usize..=6,
        a in any::<u32>(),
        b in any::<u32>(),
        seed in any::<u64>(),
    ) {
        let mask = (1u32 << n) - 1;
        let (s, t) = (SpinGroupElement(a & mask), SpinGroupElement(b & mask));
        let h = sample_instance(n, 1.0, seed).unwrap().energies;
        let once = act(s, &h, n).unwrap();
        prop_assert_eq!(act(s, &once, n).unwrap(), h.clone());
        prop_assert_eq!(act(t, &once, n).unwrap(), act(t.compose(s), &h, n).unwrap());
        let mut x = once.clone();
        let mut y = h.clone();
        x.sort_by(f64::total_cmp);
        y.sort_by(f64::total_cmp);
        prop_assert_eq!(x, y);
    }
}

#[test]
fn nu_at_infinite_temperature_is_uniform() {
    let inst = sample_instance(4, 0.0, 7).unwrap();
    let nu = nu_measure(&inst).unwrap();
    assert_eq!(nu.support.len(), 16);
    assert!(nu.weights.iter().all(|w| (w - 1.0 / 16.0).abs() < 1e-15));
}

#[test]
fn nu_of_the_energy_at_identity_is_the_gibbs_mean_energy() {
    let inst = sample_instance(6, 0.9, 2).unwrap();
    let nu = nu_measure(&inst).unwrap();
    let pi = gibbs_measure(&inst);
    let direct: f64 = pi.as_slice().iter().zip(&inst.energies).map(|(p, h)| p * h).sum();
    let via_nu = nu.integrate(&inst.energies, &TestFunctional::Evaluation { at: 0 });
    assert!((direct - via_nu).abs() < 1e-12);
}

#[test]
fn shift_identity_at_the_identity_element() {
    let inst = sample_instance(3, 1.0, 1).unwrap();
    let r = shift_identity_check(&inst, SpinGroupElement::IDENTITY, 1.0, (0.5, 1.5), &evaluation_basis(3), 8).unwrap();
    assert_eq!(r.single_time_discrepancy, 0.0);
    assert!(r.holds);
}

#[test]
fn shift_identity_for_random_elements() {
    for seed in 0..5 {
        let inst = sample_instance(4, 0.8 * beta_c(), seed).unwrap();
        let sigma = SpinGroupElement((seed as u32 * 7 + 3) & 15);
        let r = shift_identity_check(&inst, sigma, 1.0, (0.5, 1.5), &evaluation_basis(4), 8).unwrap();
        assert!(r.holds, "{r:?}");
    }
    let inst = sample_instance(3, 1.2, 9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let fs = random_cosines(3, 6, &mut rng);
    assert!(shift_identity_check(&inst, SpinGroupElement(5), 2.0, (0.5, 1.5), &fs, 8).unwrap().holds);
}

#[test]
fn nu_is_invariant_and_reversible() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let fs = random_cosines(3, 20, &mut rng);
    let inst = sample_instance(3, 0.7 * beta_c(), 4).unwrap();
    assert!(invariance_reversibility_check(&inst, 0.0, &fs, 8).unwrap().holds);
    let r = invariance_reversibility_check(&inst, 1.0, &fs, 8).unwrap();
    assert!(r.holds, "{r:?}");
    let flat = sample_instance(3, 0.0, 4).unwrap();
    assert!(invariance_reversibility_check(&flat, 1.0, &evaluation_basis(3), 8).unwrap().holds);
}

#[test]
fn symmetric_tables_merge_and_stay_invariant() {
    let h: Vec<f64> = (0..8u32).map(|x| if x & 4 == 0 { 1.0 } else { -0.5 }).collect();
    let inst = RemInstance::from_energies(3, 1.0, h).unwrap();
    let r = invariance_reversibility_check(&inst, 0.7, &evaluation_basis(3), 8).unwrap();
    assert_eq!(r.support_size, 2);
    assert!(r.holds);
}

#[test]
fn start_dependence_averages_out() {
    let seeds: Vec<u64> = (0..100).collect();
    let mut fs = evaluation_basis(3);
    fs.push(TestFunctional::Square { at: 0 });
    let r = sigma_independence(3, 0.6 * beta_c(), &seeds, 1.0, &fs, 8).unwrap();
    assert!(r.all_overlap, "{r:?}");
}

/// `sum_y |p_t(0, y) - 2^{-N}|` for independent spins flipping at rate `1/N`.
fn hypercube_l1(n: usize, t: f64) -> f64 {
    let e = (-2.0 * t / n as f64).exp();
    let (a, b) = ((1.0 + e) / 2.0, (1.0 - e) / 2.0);
    let uniform = 0.5f64.powi(n as i32);
    let mut binom = 1.0;
    let mut total = 0.0;
    for k in 0..=n {
        total += binom * (a.powi((n - k) as i32) * b.powi(k as i32) - uniform).abs();
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    total
}

#[test]
fn infinite_temperature_matches_the_product_chain() {
    let n = 6;
    let grid: Vec<f64> = (1..=80).map(|k| k as f64 * 0.25).collect();
    let opts = TAvOptions { epsilon: 0.25, time_grid: grid.clone(), cap: 10, c: 1.0, c1: 1.0 };
    let r = t_av_estimate(n, 0.0, &[0, 1, 2], &opts).unwrap();
    for (i, &t) in grid.iter().enumerate() {
        let exact = hypercube_l1(n, t);
        assert!(r.mean_lower[i] <= exact + 1e-9 && exact <= r.mean_upper[i] + 1e-9, "t={t}");
        assert!((r.mean_upper[i] - exact).abs() < 1e-9, "uniform start is row-symmetric at beta = 0");
    }
    let oracle = grid.iter().copied().find(|&t| hypercube_l1(n, t) <= 0.25).unwrap();
    assert_eq!(r.t_av_upper, Some(oracle));
    assert!(r.warnings.iter().any(|w| w.contains("seeds")));
}

#[test]
fn large_epsilon_gives_zero() {
    let opts = TAvOptions { epsilon: 2.0, time_grid: vec![0.5, 1.0], cap: 10, c: 1.0, c1: 1.0 };
    assert_eq!(t_av_estimate(4, 1.0, &[0], &opts).unwrap().t_av_upper, Some(0.0));
}
