//! The run manifest embedded in every report.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<String>,
    pub parameters: BTreeMap<String, Value>,
    pub version: String,
}

impl RunManifest {
    pub fn new(command: &str, inputs: &[&std::path::Path]) -> Self {
        RunManifest {
            command: command.to_string(),
            inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
            parameters: BTreeMap::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(key.to_string(), json!(value));
        self
    }
}

/// A finished command: its report and whether the checks held.
pub struct Outcome {
    pub manifest: RunManifest,
    pub result: Value,
    pub pass: bool,
}

impl Outcome {
    pub fn report(&self) -> Value {
        json!({
            "manifest": self.manifest,
            "pass": self.pass,
            "result": self.result,
        })
    }
}
