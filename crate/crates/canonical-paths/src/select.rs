//! One path per ordered pair, chosen to avoid bad interior points.
//!
//! With `r = N / ln N`:
//! * `|x - y| >= r`: the first cyclic path, by start site, whose interior is
//!   good; otherwise the path started at site 0.
//! * `|x - y| < r`: the first good `z` in index order with `|x - z| >= r`,
//!   `|z - y| >= r` and `|x - z| + |z - y| <= N`, joined by the first pair of
//!   good cyclic legs whose union is self-avoiding; otherwise the path started
//!   at site 0, flagged as a fallback.
//!
//! Every selected path has length at most `N`.

use poincare_bounds::PathSystem;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{GoodBadClassification, ThresholdVariant};
use crate::error::{PathsError, Result};
use crate::hypercube::{cyclic_flip_path, cyclic_sites, disagreement_sites, hamming, HypercubePath};

/// Largest `N` for which a family is materialized (`4^N` codes).
pub const MAX_FAMILY_N: usize = 13;

const COMPOSITE: u32 = 1 << 31;
const SHORT_FALLBACK: u32 = 1 << 30;
const LONG_FALLBACK: u32 = 1 << 29;
const SITE_MASK: u32 = 0x1f;

/// How the path for one pair was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathKind {
    Trivial,
    /// Cyclic path from `start`; `fallback` when no cyclic path had a good interior.
    Long { start: usize, fallback: bool },
    /// Cyclic path from `start` to `z`, then from `z_start` to the target.
    Composite { z: u32, start: usize, z_start: usize },
    /// Short pair without an admissible intermediate point.
    ShortFallback,
}

/// A selected path for every ordered pair of configurations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathFamily {
    pub n: usize,
    pub c_e: f64,
    pub variant: ThresholdVariant,
    pub threshold: f64,
    /// Packed choice per pair, indexed by `x * 2^N + y`.
    pub codes: Vec<u32>,
}

fn cyclic_interior_good(class: &GoodBadClassification, n: usize, x: u32, y: u32, start: usize) -> bool {
    let mut cur = x;
    for s in cyclic_sites(n, x, y, start) {
        cur ^= 1 << s;
        if cur != y && !class.is_good(cur) {
            return false;
        }
    }
    true
}

fn cyclic_vertices(n: usize, x: u32, y: u32, start: usize, out: &mut Vec<u32>) {
    out.clear();
    out.push(x);
    let mut cur = x;
    for s in cyclic_sites(n, x, y, start) {
        cur ^= 1 << s;
        out.push(cur);
    }
}

fn select_pair(class: &GoodBadClassification, x: u32, y: u32) -> u32 {
    let n = class.n;
    if x == y {
        return 0;
    }
    let r = n as f64 / (n as f64).ln();
    let d = hamming(x, y) as f64;
    if d >= r {
        return match disagreement_sites(x, y).find(|&s| cyclic_interior_good(class, n, x, y, s)) {
            Some(s) => s as u32,
            None => LONG_FALLBACK,
        };
    }
    let mut leg1 = Vec::with_capacity(n + 1);
    let mut leg2 = Vec::with_capacity(n + 1);
    for z in 0..(1u32 << n) {
        let (dxz, dzy) = (hamming(x, z), hamming(z, y));
        if !class.is_good(z) || (dxz as f64) < r || (dzy as f64) < r || dxz + dzy > n {
            continue;
        }
        let good_j: Vec<usize> =
            disagreement_sites(z, y).filter(|&j| cyclic_interior_good(class, n, z, y, j)).collect();
        if good_j.is_empty() {
            continue;
        }
        for i in disagreement_sites(x, z) {
            if !cyclic_interior_good(class, n, x, z, i) {
                continue;
            }
            cyclic_vertices(n, x, z, i, &mut leg1);
            leg1.pop();
            for &j in &good_j {
                cyclic_vertices(n, z, y, j, &mut leg2);
                if leg2[1..].iter().all(|v| !leg1.contains(v)) {
                    return COMPOSITE | (z << 10) | ((j as u32) << 5) | i as u32;
                }
            }
        }
    }
    SHORT_FALLBACK
}

/// Selects the family for a classification.
pub fn select_paths(class: &GoodBadClassification) -> Result<PathFamily> {
    let n = class.n;
    if n < 2 || n > MAX_FAMILY_N {
        return Err(if n < 2 {
            PathsError::InvalidArgument(format!("N = {n} must be at least 2"))
        } else {
            PathsError::TooLarge { n, max: MAX_FAMILY_N }
        });
    }
    let size = 1usize << n;
    let codes: Vec<u32> = (0..size * size)
        .into_par_iter()
        .with_min_len(1024)
        .map(|k| select_pair(class, (k / size) as u32, (k % size) as u32))
        .collect();
    Ok(PathFamily { n, c_e: class.c_e, variant: class.variant, threshold: class.threshold, codes })
}

impl PathFamily {
    fn code(&self, x: u32, y: u32) -> u32 {
        self.codes[((x as usize) << self.n) + y as usize]
    }

    pub fn kind(&self, x: u32, y: u32) -> PathKind {
        let c = self.code(x, y);
        if x == y {
            PathKind::Trivial
        } else if c & COMPOSITE != 0 {
            PathKind::Composite {
                z: (c >> 10) & 0xffff,
                start: (c & SITE_MASK) as usize,
                z_start: ((c >> 5) & SITE_MASK) as usize,
            }
        } else if c & SHORT_FALLBACK != 0 {
            PathKind::ShortFallback
        } else {
            PathKind::Long { start: (c & SITE_MASK) as usize, fallback: c & LONG_FALLBACK != 0 }
        }
    }

    pub fn path(&self, x: u32, y: u32) -> HypercubePath {
        match self.kind(x, y) {
            PathKind::Trivial => HypercubePath { n: self.n, vertices: vec![x] },
            PathKind::Long { start, .. } => cyclic_flip_path(self.n, x, y, start),
            PathKind::ShortFallback => cyclic_flip_path(self.n, x, y, 0),
            PathKind::Composite { z, start, z_start } => {
                let mut p = cyclic_flip_path(self.n, x, z, start);
                p.vertices.extend_from_slice(&cyclic_flip_path(self.n, z, y, z_start).vertices[1..]);
                p
            }
        }
    }

    /// Sites flipped along the path, in order.
    pub fn flip_sequence(&self, x: u32, y: u32) -> Vec<u8> {
        self.path(x, y).edges().map(|(a, b)| (a ^ b).trailing_zeros() as u8).collect()
    }

    pub fn num_configurations(&self) -> usize {
        1 << self.n
    }

    /// Ordered pairs whose short-pair rule found no intermediate point.
    pub fn short_fallback_count(&self) -> usize {
        self.codes.iter().filter(|c| *c & SHORT_FALLBACK != 0).count()
    }

    pub fn composite_count(&self) -> usize {
        self.codes.iter().filter(|c| *c & COMPOSITE != 0).count()
    }
}

impl PathSystem for PathFamily {
    fn num_states(&self) -> usize {
        1 << self.n
    }

    fn for_each_edge<F: FnMut(usize, usize)>(&self, x: usize, y: usize, mut visit: F) -> bool {
        let (x, y) = (x as u32, y as u32);
        let mut walk = |from: u32, to: u32, start: usize| {
            let mut cur = from;
            for s in cyclic_sites(self.n, from, to, start) {
                let next = cur ^ (1 << s);
                visit(cur as usize, next as usize);
                cur = next;
            }
        };
        match self.kind(x, y) {
            PathKind::Trivial => return false,
            PathKind::Long { start, .. } => walk(x, y, start),
            PathKind::ShortFallback => walk(x, y, 0),
            PathKind::Composite { z, start, z_start } => {
                walk(x, z, start);
                walk(z, y, z_start);
            }
        }
        true
    }

    fn path_len(&self, x: usize, y: usize) -> Option<usize> {
        if x == y {
            return None;
        }
        Some(match self.kind(x as u32, y as u32) {
            PathKind::Composite { z, .. } => hamming(x as u32, z) + hamming(z, y as u32),
            _ => hamming(x as u32, y as u32),
        })
    }
}
