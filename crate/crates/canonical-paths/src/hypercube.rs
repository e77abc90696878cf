//! Configurations of `{-1,+1}^N` as bit patterns and the cyclic-flip paths.
//!
//! Configuration index bit `s` is set when spin `s + 1` equals `-1`; index 0 is
//! the all-plus configuration. Sites are 0-based throughout.

use serde::{Deserialize, Serialize};

/// Number of disagreeing spins.
pub fn hamming(x: u32, y: u32) -> usize {
    (x ^ y).count_ones() as usize
}

/// Disagreement sites of `x` and `y` in the cyclic order `start, start+1, ..., n-1, 0, ..., start-1`.
pub fn cyclic_sites(n: usize, x: u32, y: u32, start: usize) -> impl Iterator<Item = usize> {
    let diff = x ^ y;
    (0..n).map(move |k| (start + k) % n).filter(move |&s| diff >> s & 1 == 1)
}

/// Disagreement sites in increasing order.
pub fn disagreement_sites(x: u32, y: u32) -> impl Iterator<Item = usize> {
    let mut diff = x ^ y;
    std::iter::from_fn(move || {
        (diff != 0).then(|| {
            let s = diff.trailing_zeros() as usize;
            diff &= diff - 1;
            s
        })
    })
}

/// A nearest-neighbor path on the hypercube.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypercubePath {
    pub n: usize,
    pub vertices: Vec<u32>,
}

impl HypercubePath {
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    /// Vertices other than the endpoints.
    pub fn interior(&self) -> &[u32] {
        if self.vertices.len() <= 2 {
            &[]
        } else {
            &self.vertices[1..self.vertices.len() - 1]
        }
    }

    pub fn is_self_avoiding(&self) -> bool {
        let mut v = self.vertices.clone();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    }
}

/// Path from `x` to `y` flipping the disagreeing spins in cyclic order from `start`.
pub fn cyclic_flip_path(n: usize, x: u32, y: u32, start: usize) -> HypercubePath {
    let mut vertices = vec![x];
    let mut cur = x;
    for s in cyclic_sites(n, x, y, start % n.max(1)) {
        cur ^= 1 << s;
        vertices.push(cur);
    }
    HypercubePath { n, vertices }
}

/// Whether the paths started at each disagreement site have pairwise disjoint interiors.
pub fn interior_disjointness_check(n: usize, x: u32, y: u32) -> bool {
    let mut seen: Vec<u32> = disagreement_sites(x, y)
        .flat_map(|s| cyclic_flip_path(n, x, y, s).interior().to_vec())
        .collect();
    seen.sort_unstable();
    seen.windows(2).all(|w| w[0] != w[1])
}
