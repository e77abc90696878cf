//! Partition functions, Gibbs weights and occupation numbers against direct computation.

use chain_core::ReversibleChain;
use rem_model::{
    beta_c, conductance_closed_form, gibbs_measure, log_partition, metropolis_chain, occupation_profile,
    sample_instance, Constraint, RemInstance, DEFAULT_CAP,
};

/// Error-free `a + b = s + e`.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// `ln sum_i e^{x_i}` accumulated in double-double arithmetic.
fn log_sum_exp_dd(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut hi, mut lo) = (0.0, 0.0);
    for &x in xs {
        let (s, e) = two_sum(hi, (x - m).exp());
        hi = s;
        lo += e;
    }
    m + (hi + lo).ln()
}

#[test]
fn log_partition_matches_extended_precision() {
    for n in 1..=12 {
        for (k, frac) in [0.0, 0.5, 1.0, 1.5].into_iter().enumerate() {
            let inst = sample_instance(n, frac * beta_c(), 100 + k as u64).unwrap();
            let terms: Vec<f64> = inst.energies.iter().map(|h| -inst.beta * h).collect();
            let oracle = log_sum_exp_dd(&terms);
            let got = log_partition(&inst, Constraint::None).log_value;
            assert!((got - oracle).abs() <= 1e-12 * oracle.abs().max(1.0), "N={n} beta={} {got} {oracle}", inst.beta);
        }
    }
}

#[test]
fn constrained_partition_sums_the_selected_terms() {
    let inst = sample_instance(10, 1.0, 4).unwrap();
    let d = 0.4;
    let terms: Vec<f64> =
        inst.energies.iter().filter(|&&h| h <= -d * 10.0).map(|h| -inst.beta * h).collect();
    let got = log_partition(&inst, Constraint::AtMost { d });
    assert!(!got.is_empty);
    assert!((got.log_value - log_sum_exp_dd(&terms)).abs() < 1e-12);
}

#[test]
fn gibbs_measure_on_three_spins() {
    let h = vec![1.0, -0.5, 2.0, 0.0, -1.5, 0.25, 3.0, -2.0];
    let inst = RemInstance::from_energies(3, 0.7, h.clone()).unwrap();
    let w: Vec<f64> = h.iter().map(|e| (-0.7 * e).exp()).collect();
    let z: f64 = w.iter().sum();
    for (p, wi) in gibbs_measure(&inst).as_slice().iter().zip(&w) {
        assert!((p - wi / z).abs() < 1e-15);
    }
}

#[test]
fn metropolis_chain_is_reversible_with_closed_form_conductance() {
    for seed in 0..5 {
        let inst = sample_instance(6, 0.8 * beta_c(), seed).unwrap();
        let chain: ReversibleChain = metropolis_chain(&inst, DEFAULT_CAP).unwrap();
        let log_z = log_partition(&inst, Constraint::None).log_value;
        for (x, y, _) in chain.directed_edges() {
            let fwd = chain.pi()[x] * chain.rate(x, y);
            let back = chain.pi()[y] * chain.rate(y, x);
            assert!((fwd - back).abs() <= 1e-14 * fwd);
            let q = conductance_closed_form(&inst, x as u32, y as u32, log_z);
            assert!((chain.conductance(x, y) - q).abs() <= 1e-12 * q);
        }
    }
}

#[test]
fn energies_have_the_right_moments() {
    let n = 6;
    let seeds = 400;
    let size = 1 << n;
    let (mut sum, mut sq, mut cross) = (0.0, 0.0, 0.0);
    for seed in 0..seeds {
        let inst = sample_instance(n, 1.0, seed).unwrap();
        for x in 0..size {
            let h = inst.energies[x];
            sum += h;
            sq += h * h;
            cross += h * inst.energies[(x + 1) % size];
        }
    }
    let count = (seeds as usize * size) as f64;
    let nf = n as f64;
    let mean = sum / count;
    let var = sq / count;
    let cov = cross / count;
    // Standard errors: sqrt(N / count), N sqrt(2 / count), N / sqrt(count).
    assert!(mean.abs() < 4.0 * (nf / count).sqrt(), "mean {mean}");
    assert!((var - nf).abs() < 4.0 * nf * (2.0 / count).sqrt(), "var {var}");
    assert!(cov.abs() < 4.0 * nf / count.sqrt(), "cov {cov}");
}

#[test]
fn occupation_counts_are_binomial() {
    let n = 10;
    let seeds = 200;
    let d = 0.9 * beta_c();
    let first = occupation_profile(&sample_instance(n, 1.0, 0).unwrap(), d, 1.0, 1.0).unwrap();
    let mut totals = vec![0usize; first.intervals.len()];
    for seed in 0..seeds {
        let prof = occupation_profile(&sample_instance(n, 1.0, seed).unwrap(), d, 1.0, 1.0).unwrap();
        assert!(prof.sum_rule_holds);
        for (t, i) in totals.iter_mut().zip(&prof.intervals) {
            *t += i.count;
        }
    }
    let trials = (seeds as usize) << n;
    for (t, i) in totals.iter().zip(&first.intervals) {
        let mean = trials as f64 * i.p;
        let sd = (trials as f64 * i.p * (1.0 - i.p)).sqrt();
        assert!((*t as f64 - mean).abs() <= 4.0 * sd + 1.0, "k={} count {t} mean {mean} sd {sd}", i.k);
    }
}

#[test]
fn interval_probability_brackets() {
    for n in 8..=14 {
        let prof = occupation_profile(&sample_instance(n, 1.0, 0).unwrap(), beta_c(), 1.0, 1.0).unwrap();
        assert!(!prof.brackets.is_empty());
        for b in &prof.brackets {
            assert!(b.holds, "N={n} k={} p={} bracket [{}, {}]", b.k, b.p, b.lower, b.upper);
        }
    }
}
