//! Machine-readable run reports.
//!
//! Reports are byte-identical across runs with the same seed and inputs:
//! object keys are sorted by the serializer and the timing field is omitted
//! unless explicitly requested.

use crate::json::{canonical_string, REPORT_SCHEMA};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug)]
pub struct RunReport {
    pub command: String,
    pub seed: u64,
    pub inputs_digest: String,
    pub outputs: Value,
    pub timing_ms: Option<u128>,
}

impl RunReport {
    pub fn new(command: &str, seed: u64, inputs: &Value, outputs: Value) -> Self {
        RunReport {
            command: command.to_string(),
            seed,
            inputs_digest: digest_of(inputs),
            outputs,
            timing_ms: None,
        }
    }

    pub fn with_timing(mut self, ms: u128) -> Self {
        self.timing_ms = Some(ms);
        self
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "schema": REPORT_SCHEMA,
            "command": self.command,
            "seed": self.seed,
            "inputs_digest": self.inputs_digest,
            "outputs": self.outputs,
        });
        if let Some(ms) = self.timing_ms {
            v["timing_ms"] = Value::from(ms as u64);
        }
        v
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("report serializes")
    }
}

pub fn digest_of(inputs: &Value) -> String {
    let mut hasher = Sha256::new();
    hasher.update(canonical_string(inputs).as_bytes());
    let out = hasher.finalize();
    out.iter().map(|b| format!("{:02x}", b)).collect()
}
