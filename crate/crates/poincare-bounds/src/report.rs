//! Named bound values with every parameter echoed.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// A bound together with the constants and inputs it was computed from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    /// Bound value; may be `inf` when only `log_value` is representable.
    pub value: f64,
    /// Natural log of `value`.
    pub log_value: f64,
    pub parameters: BTreeMap<String, f64>,
    pub provenance: BTreeMap<String, String>,
}

impl BoundReport {
    pub fn from_log(name: &str, log_value: f64) -> Self {
        Self {
            name: name.to_string(),
            value: log_value.exp(),
            log_value,
            parameters: BTreeMap::new(),
            provenance: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }

    pub fn with_provenance(mut self, key: &str, value: &str) -> Self {
        self.provenance.insert(key.to_string(), value.to_string());
        self
    }
}
