//! Validated reversible chains stored in compressed sparse row form.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{ChainError, Result};

/// Relative tolerance of the detailed-balance validator.
pub const DETAILED_BALANCE_TOLERANCE: f64 = 1e-10;
/// Absolute tolerance on `sum(pi) = 1`.
pub const PI_MASS_TOLERANCE: f64 = 1e-10;

/// A continuous-time Markov chain on `{0, .., n-1}` with jump rates `K(x,y)`,
/// reversible with respect to a strictly positive law `pi`.
///
/// Rows are sorted by target so that `K(x,y)` lookups are binary searches.
/// Every stored entry has a strictly positive rate, and its reverse entry is
/// stored too.
#[derive(Debug, Clone, PartialEq)]
pub struct ReversibleChain {
    pi: Vec<f64>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    rates: Vec<f64>,
    exit: Vec<f64>,
}

/// One off-diagonal rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    pub x: usize,
    pub y: usize,
    pub rate: f64,
}

impl ReversibleChain {
    /// Builds and validates a chain from off-diagonal rates `K(x,y)`.
    ///
    /// Zero rates are dropped and repeated `(x,y)` entries are summed.
    pub fn new(pi: Vec<f64>, rates: impl IntoIterator<Item = Rate>) -> Result<Self> {
        let n = pi.len();
        if n == 0 {
            return Err(ChainError::InvalidArgument("empty state space".into()));
        }
        if let Some((index, &value)) = pi.iter().enumerate().find(|(_, p)| !(**p > 0.0 && p.is_finite())) {
            return Err(ChainError::NonPositivePi { index, value });
        }
        let mass: f64 = pi.iter().sum();
        if (mass - 1.0).abs() > PI_MASS_TOLERANCE {
            return Err(ChainError::InvalidProbability(format!("pi sums to {mass}")));
        }

        let mut entries: Vec<(usize, usize, f64)> = Vec::new();
        for Rate { x, y, rate } in rates {
            if x >= n || y >= n {
                return Err(ChainError::InvalidRate(format!("({x},{y}) outside 0..{n}")));
            }
            if x == y {
                return Err(ChainError::InvalidRate(format!("diagonal entry ({x},{x})")));
            }
            if !(rate >= 0.0 && rate.is_finite()) {
                return Err(ChainError::InvalidRate(format!("K({x},{y}) = {rate}")));
            }
            if rate > 0.0 {
                entries.push((x, y, rate));
            }
        }
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        entries.dedup_by(|later, earlier| {
            if later.0 == earlier.0 && later.1 == earlier.1 {
                earlier.2 += later.2;
                true
            } else {
                false
            }
        });

        let mut offsets = vec![0usize; n + 1];
        for &(x, _, _) in &entries {
            offsets[x + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets: Vec<usize> = entries.iter().map(|e| e.1).collect();
        let rates: Vec<f64> = entries.iter().map(|e| e.2).collect();
        let exit = (0..n).map(|x| rates[offsets[x]..offsets[x + 1]].iter().sum()).collect();
        let chain = Self { pi, offsets, targets, rates, exit };
        chain.check_detailed_balance()?;
        chain.check_irreducible()?;
        Ok(chain)
    }

    fn check_detailed_balance(&self) -> Result<()> {
        for x in 0..self.n() {
            for (y, kxy) in self.neighbors(x) {
                let kyx = self.rate(y, x);
                let a = self.pi[x] * kxy;
                let b = self.pi[y] * kyx;
                let residual = (a - b).abs();
                if residual > DETAILED_BALANCE_TOLERANCE * a.max(b) {
                    return Err(ChainError::DetailedBalanceViolation { x, y, residual });
                }
            }
        }
        Ok(())
    }

    fn check_irreducible(&self) -> Result<()> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(x) = queue.pop_front() {
            for (y, _) in self.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    reached += 1;
                    queue.push_back(y);
                }
            }
        }
        if reached == n {
            Ok(())
        } else {
            Err(ChainError::NotIrreducible { reached, n })
        }
    }

    pub fn n(&self) -> usize {
        self.pi.len()
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    /// Smallest stationary weight.
    pub fn pi_min(&self) -> f64 {
        self.pi.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Nonzero rates out of `x`, sorted by target.
    pub fn neighbors(&self, x: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[x]..self.offsets[x + 1];
        self.targets[r.clone()].iter().copied().zip(self.rates[r].iter().copied())
    }

    /// Position of the directed edge `x -> y` in the row storage.
    pub fn edge_index(&self, x: usize, y: usize) -> Option<usize> {
        let (lo, hi) = (self.offsets[x], self.offsets[x + 1]);
        self.targets[lo..hi].binary_search(&y).ok().map(|k| lo + k)
    }

    /// Number of directed edges with positive rate.
    pub fn num_directed_edges(&self) -> usize {
        self.targets.len()
    }

    /// Endpoints of the directed edge with storage index `e`.
    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        let x = self.offsets.partition_point(|&o| o <= e) - 1;
        (x, self.targets[e])
    }

    /// All directed edges `(x, y, K(x,y))`.
    pub fn directed_edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n()).flat_map(move |x| self.neighbors(x).map(move |(y, r)| (x, y, r)))
    }

    /// `K(x,y)`, zero when there is no edge.
    pub fn rate(&self, x: usize, y: usize) -> f64 {
        self.edge_index(x, y).map_or(0.0, |e| self.rates[e])
    }

    /// Rate stored at edge index `e`.
    pub fn rate_at(&self, e: usize) -> f64 {
        self.rates[e]
    }

    /// Total jump rate out of `x`.
    pub fn exit_rate(&self, x: usize) -> f64 {
        self.exit[x]
    }

    pub fn max_exit_rate(&self) -> f64 {
        self.exit.iter().copied().fold(0.0, f64::max)
    }

    /// Symmetric kernel `k(x,y) = K(x,y) / pi(y)`.
    pub fn kernel(&self, x: usize, y: usize) -> f64 {
        self.rate(x, y) / self.pi[y]
    }

    /// Edge conductance `Q(x,y) = k(x,y) pi(x) pi(y) = pi(x) K(x,y)`.
    pub fn conductance(&self, x: usize, y: usize) -> f64 {
        self.pi[x] * self.rate(x, y)
    }

    /// Conductance of the directed edge with storage index `e`.
    pub fn conductance_at(&self, e: usize) -> f64 {
        let (x, _) = self.edge_endpoints(e);
        self.pi[x] * self.rates[e]
    }

    fn check_dim(&self, v: &[f64]) -> Result<()> {
        if v.len() == self.n() {
            Ok(())
        } else {
            Err(ChainError::DimensionMismatch { expected: self.n(), got: v.len() })
        }
    }

    /// Dirichlet form `(1/2) sum_{x,y} (f(x)-f(y)) (g(x)-g(y)) k(x,y) pi(x) pi(y)`.
    pub fn dirichlet_form(&self, f: &[f64], g: &[f64]) -> Result<f64> {
        self.check_dim(f)?;
        self.check_dim(g)?;
        let mut acc = 0.0;
        for (x, y, r) in self.directed_edges() {
            acc += (f[x] - f[y]) * (g[x] - g[y]) * self.pi[x] * r;
        }
        Ok(0.5 * acc)
    }

    /// Generator action `(Lf)(x) = sum_y K(x,y) (f(y) - f(x))`.
    pub fn generator_apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(f)?;
        Ok(self.generator_apply_unchecked(f))
    }

    pub(crate) fn generator_apply_unchecked(&self, f: &[f64]) -> Vec<f64> {
        (0..self.n())
            .map(|x| self.neighbors(x).map(|(y, r)| r * (f[y] - f[x])).sum())
            .collect()
    }

    /// Action of the positive semidefinite matrix `S = -D^{1/2} L D^{-1/2}`
    /// with `D = diag(pi)`.
    pub fn symmetrized_apply(&self, v: &[f64], sqrt_pi: &[f64]) -> Vec<f64> {
        (0..self.n())
            .map(|x| {
                let off: f64 = self.neighbors(x).map(|(y, r)| r * sqrt_pi[x] / sqrt_pi[y] * v[y]).sum();
                self.exit[x] * v[x] - off
            })
            .collect()
    }

    /// Dense `S = -D^{1/2} L D^{-1/2}`, symmetric by reversibility.
    pub fn symmetrized_dense(&self) -> faer::Mat<f64> {
        let n = self.n();
        let mut s = faer::Mat::<f64>::zeros(n, n);
        for x in 0..n {
            s[(x, x)] = self.exit[x];
            for (y, r) in self.neighbors(x) {
                // sqrt(pi(x)/pi(y)) K(x,y) = sqrt(K(x,y) K(y,x)) under detailed balance.
                s[(x, y)] = -(r * self.rate(y, x)).sqrt();
            }
        }
        s
    }

    /// The same chain with states renumbered by `perm` (`x -> perm[x]`).
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        if perm.len() != n {
            return Err(ChainError::DimensionMismatch { expected: n, got: perm.len() });
        }
        let mut pi = vec![0.0; n];
        for x in 0..n {
            pi[perm[x]] = self.pi[x];
        }
        let rates: Vec<Rate> =
            self.directed_edges().map(|(x, y, rate)| Rate { x: perm[x], y: perm[y], rate }).collect();
        Self::new(pi, rates)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn two_state(a: f64, b: f64) -> ReversibleChain {
        let pi = vec![b / (a + b), a / (a + b)];
        ReversibleChain::new(pi, [Rate { x: 0, y: 1, rate: a }, Rate { x: 1, y: 0, rate: b }]).unwrap()
    }

    #[test]
    fn two_state_conductance() {
        let c = two_state(1.0, 1.0);
        assert_eq!(c.conductance(0, 1), 0.5);
        assert_eq!(c.conductance(1, 0), 0.5);
        assert_eq!(c.kernel(0, 1), 2.0);
        assert_eq!(c.kernel(0, 1), c.kernel(1, 0));
    }

    #[test]
    fn rejects_degenerate_pi() {
        let err = ReversibleChain::new(vec![1.0, 0.0], [Rate { x: 0, y: 1, rate: 1.0 }]).unwrap_err();
        assert!(matches!(err, ChainError::NonPositivePi { index: 1, .. }));
    }

    #[test]
    fn rejects_one_way_rates() {
        let err = ReversibleChain::new(vec![0.5, 0.5], [Rate { x: 0, y: 1, rate: 1.0 }]).unwrap_err();
        assert!(matches!(err, ChainError::DetailedBalanceViolation { .. }));
    }

    #[test]
    fn rejects_disconnected_graph() {
        let rates = [
            Rate { x: 0, y: 1, rate: 1.0 },
            Rate { x: 1, y: 0, rate: 1.0 },
            Rate { x: 2, y: 3, rate: 1.0 },
            Rate { x: 3, y: 2, rate: 1.0 },
        ];
        let err = ReversibleChain::new(vec![0.25; 4], rates).unwrap_err();
        assert_eq!(err, ChainError::NotIrreducible { reached: 2, n: 4 });
    }

    #[test]
    fn two_state_dirichlet_form() {
        let c = two_state(1.0, 1.0);
        assert_eq!(c.dirichlet_form(&[1.0, -1.0], &[1.0, -1.0]).unwrap(), 2.0);
        assert_eq!(c.dirichlet_form(&[3.0, 3.0], &[1.0, -1.0]).unwrap(), 0.0);
        assert!(c.dirichlet_form(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn dirichlet_form_matches_minus_pi_f_lf() {
        let c = two_state(0.3, 1.7);
        let f = [0.4, -2.0];
        let lf = c.generator_apply(&f).unwrap();
        let e: f64 = -c.pi().iter().zip(&f).zip(&lf).map(|((p, a), b)| p * a * b).sum::<f64>();
        assert!((c.dirichlet_form(&f, &f).unwrap() - e).abs() < 1e-14);
    }

    #[test]
    fn edge_index_round_trip() {
        let c = two_state(1.0, 2.0);
        for e in 0..c.num_directed_edges() {
            let (x, y) = c.edge_endpoints(e);
            assert_eq!(c.edge_index(x, y), Some(e));
        }
        assert_eq!(c.edge_index(0, 0), None);
    }
}
