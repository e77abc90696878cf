//! Random reversible chains for experiments and property tests.

use rand::Rng;

use crate::chain::{Rate, ReversibleChain};

/// Random connected reversible chain on `n` states.
///
/// `pi` is drawn with weights in `[0.05, 1]`, the graph is a random spanning
/// tree plus each remaining pair with probability `density`, and rates are
/// `K(x,y) = k(x,y) pi(y)` with a symmetric kernel `k` in `[0.2, 2]`.
pub fn random_reversible_chain<R: Rng + ?Sized>(n: usize, density: f64, rng: &mut R) -> ReversibleChain {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let pi: Vec<f64> = raw.iter().map(|p| p / total).collect();
    let mut pairs = Vec::new();
    for y in 1..n {
        pairs.push((rng.random_range(0..y), y));
    }
    for x in 0..n {
        for y in x + 1..n {
            if !pairs.contains(&(x, y)) && rng.random_bool(density) {
                pairs.push((x, y));
            }
        }
    }
    let mut rates = Vec::with_capacity(2 * pairs.len());
    for (x, y) in pairs {
        let k = rng.random_range(0.2..2.0);
        rates.push(Rate { x, y, rate: k * pi[y] });
        rates.push(Rate { x: y, y: x, rate: k * pi[x] });
    }
    ReversibleChain::new(pi, rates).expect("generated chain is reversible and connected")
}
