//! Path systems: one path per ordered pair of distinct states.

use std::collections::VecDeque;

use chain_core::ReversibleChain;
use serde::{Deserialize, Serialize};

use crate::error::{BoundError, Result};

/// A choice of path `gamma(x,y)` for every ordered pair `x != y`.
pub trait PathSystem: Sync {
    fn num_states(&self) -> usize;

    /// Visits the directed edges of `gamma(x,y)` in order; `false` if there is no path.
    fn for_each_edge<F: FnMut(usize, usize)>(&self, x: usize, y: usize, visit: F) -> bool;

    /// Number of edges of `gamma(x,y)`.
    fn path_len(&self, x: usize, y: usize) -> Option<usize> {
        let mut len = 0;
        self.for_each_edge(x, y, |_, _| len += 1).then_some(len)
    }
}

/// Paths stored as vertex lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplicitPaths {
    n: usize,
    /// Indexed by `x * n + y`; empty for `x == y` or missing paths.
    vertices: Vec<Vec<usize>>,
}

/// One path in a paths file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub x: usize,
    pub y: usize,
    pub vertices: Vec<usize>,
}

/// Serialized path system: `{n, paths: [{x, y, vertices}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathsFile {
    pub n: usize,
    pub paths: Vec<PathRecord>,
}

impl ExplicitPaths {
    /// Builds from vertex lists, checking endpoints and that consecutive
    /// vertices are joined by a positive rate.
    pub fn from_records(chain: &ReversibleChain, records: &[PathRecord]) -> Result<Self> {
        let n = chain.n();
        let mut vertices = vec![Vec::new(); n * n];
        for r in records {
            if r.x >= n || r.y >= n || r.x == r.y {
                return Err(BoundError::InvalidArgument(format!("bad pair ({}, {})", r.x, r.y)));
            }
            if r.vertices.first() != Some(&r.x) || r.vertices.last() != Some(&r.y) {
                return Err(BoundError::InvalidArgument(format!("path for ({}, {}) has wrong endpoints", r.x, r.y)));
            }
            for w in r.vertices.windows(2) {
                if w[0] >= n || w[1] >= n || chain.edge_index(w[0], w[1]).is_none() {
                    return Err(BoundError::ZeroConductanceEdge { x: w[0], y: w[1] });
                }
            }
            vertices[r.x * n + r.y] = r.vertices.clone();
        }
        let paths = Self { n, vertices };
        paths.check_complete()?;
        Ok(paths)
    }

    /// Breadth-first shortest paths; ties go to the smallest predecessor index.
    pub fn shortest_paths(chain: &ReversibleChain) -> Self {
        let n = chain.n();
        let mut vertices = vec![Vec::new(); n * n];
        for x in 0..n {
            let mut parent = vec![usize::MAX; n];
            parent[x] = x;
            let mut queue = VecDeque::from([x]);
            while let Some(u) = queue.pop_front() {
                for (v, _) in chain.neighbors(u) {
                    if parent[v] == usize::MAX {
                        parent[v] = u;
                        queue.push_back(v);
                    }
                }
            }
            for y in 0..n {
                if y == x || parent[y] == usize::MAX {
                    continue;
                }
                let mut path = vec![y];
                let mut cur = y;
                while cur != x {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                vertices[x * n + y] = path;
            }
        }
        Self { n, vertices }
    }

    /// Errors with the first pair lacking a path.
    pub fn check_complete(&self) -> Result<()> {
        for x in 0..self.n {
            for y in 0..self.n {
                if x != y && self.vertices[x * self.n + y].is_empty() {
                    return Err(BoundError::PathMissing { x, y });
                }
            }
        }
        Ok(())
    }

    pub fn to_file(&self) -> PathsFile {
        let mut paths = Vec::new();
        for x in 0..self.n {
            for y in 0..self.n {
                let v = &self.vertices[x * self.n + y];
                if !v.is_empty() {
                    paths.push(PathRecord { x, y, vertices: v.clone() });
                }
            }
        }
        PathsFile { n: self.n, paths }
    }

    pub fn vertices(&self, x: usize, y: usize) -> &[usize] {
        &self.vertices[x * self.n + y]
    }
}

impl PathSystem for ExplicitPaths {
    fn num_states(&self) -> usize {
        self.n
    }

    fn for_each_edge<F: FnMut(usize, usize)>(&self, x: usize, y: usize, mut visit: F) -> bool {
        let v = &self.vertices[x * self.n + y];
        if v.is_empty() {
            return false;
        }
        for w in v.windows(2) {
            visit(w[0], w[1]);
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chain_core::Rate;

    fn cycle(n: usize) -> ReversibleChain {
        let rates = (0..n).flat_map(|x| {
            [Rate { x, y: (x + 1) % n, rate: 1.0 }, Rate { x: (x + 1) % n, y: x, rate: 1.0 }]
        });
        ReversibleChain::new(vec![1.0 / n as f64; n], rates).unwrap()
    }

    #[test]
    fn bfs_paths_are_shortest() {
        let c = cycle(7);
        let p = ExplicitPaths::shortest_paths(&c);
        p.check_complete().unwrap();
        for x in 0..7 {
            for y in 0..7 {
                if x != y {
                    let d = (x as i64 - y as i64).rem_euclid(7).min((y as i64 - x as i64).rem_euclid(7));
                    assert_eq!(p.path_len(x, y), Some(d as usize));
                }
            }
        }
    }

    #[test]
    fn records_are_validated() {
        let c = cycle(4);
        let bad = [PathRecord { x: 0, y: 2, vertices: vec![0, 2] }];
        assert!(matches!(ExplicitPaths::from_records(&c, &bad), Err(BoundError::ZeroConductanceEdge { .. })));
        let partial = [PathRecord { x: 0, y: 1, vertices: vec![0, 1] }];
        assert!(matches!(ExplicitPaths::from_records(&c, &partial), Err(BoundError::PathMissing { .. })));
        let file = ExplicitPaths::shortest_paths(&c).to_file();
        let back = ExplicitPaths::from_records(&c, &file.paths).unwrap();
        assert_eq!(back, ExplicitPaths::shortest_paths(&c));
    }
}
