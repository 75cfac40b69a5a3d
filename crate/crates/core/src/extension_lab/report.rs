use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::symbol::RankProfile;

/// Uniform experiment record. Maps are ordered so reruns serialize
/// byte-identically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub parameters: BTreeMap<String, Value>,
    pub verdicts: BTreeMap<String, Value>,
    pub residuals: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_profile: Option<RankProfile>,
    /// The typed result the report was assembled from.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl ExperimentReport {
    pub fn new(experiment: impl Into<String>) -> Self {
        Self {
            experiment: experiment.into(),
            parameters: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            residuals: BTreeMap::new(),
            witness: None,
            rank_profile: None,
            details: None,
        }
    }

    pub fn parameter(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(key.into(), to_value(value));
        self
    }

    pub fn verdict(mut self, key: &str, value: impl Serialize) -> Self {
        self.verdicts.insert(key.into(), to_value(value));
        self
    }

    pub fn residual(mut self, key: &str, value: f64) -> Self {
        self.residuals.insert(key.into(), value);
        self
    }

    pub fn witness(mut self, w: Option<String>) -> Self {
        self.witness = w;
        self
    }

    pub fn rank_profile(mut self, p: RankProfile) -> Self {
        self.rank_profile = Some(p);
        self
    }

    pub fn details(mut self, d: impl Serialize) -> Self {
        self.details = Some(to_value(d));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports are plain data")
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports are plain data")
}
