//! JSON chain files: `{n, pi: [..], edges: [{x, y, rate_xy, rate_yx}]}`.

use serde::{Deserialize, Serialize};

use crate::chain::{Rate, ReversibleChain};
use crate::error::{ChainError, Result};

/// One undirected edge with both jump rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub x: usize,
    pub y: usize,
    pub rate_xy: f64,
    pub rate_yx: f64,
}

/// Serialized chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainFile {
    pub n: usize,
    pub pi: Vec<f64>,
    pub edges: Vec<EdgeRecord>,
}

impl ChainFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| ChainError::InvalidArgument(format!("chain file: {e}")))
    }

    pub fn to_chain(&self) -> Result<ReversibleChain> {
        if self.pi.len() != self.n {
            return Err(ChainError::DimensionMismatch { expected: self.n, got: self.pi.len() });
        }
        let rates = self.edges.iter().flat_map(|e| {
            [Rate { x: e.x, y: e.y, rate: e.rate_xy }, Rate { x: e.y, y: e.x, rate: e.rate_yx }]
        });
        ReversibleChain::new(self.pi.clone(), rates)
    }

    pub fn from_chain(chain: &ReversibleChain) -> Self {
        let edges = chain
            .directed_edges()
            .filter(|(x, y, _)| x < y)
            .map(|(x, y, r)| EdgeRecord { x, y, rate_xy: r, rate_yx: chain.rate(y, x) })
            .collect();
        Self { n: chain.n(), pi: chain.pi().to_vec(), edges }
    }
}
