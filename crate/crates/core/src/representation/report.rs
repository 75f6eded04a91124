//! Machine-readable verifier output.

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// `{check, inputs, result, certificates}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub inputs: Value,
    pub result: Value,
    pub certificates: Value,
}

impl Report {
    pub fn new(check: impl Into<String>, inputs: Value, result: Value, certificates: Value) -> Self {
        Report {
            check: check.into(),
            inputs,
            result,
            certificates,
        }
    }

    /// `result` as a pass flag: `true`, or an object with `"pass": true`.
    pub fn passed(&self) -> bool {
        match &self.result {
            Value::Bool(b) => *b,
            Value::Object(m) => m.get("pass").and_then(Value::as_bool).unwrap_or(false),
            _ => false,
        }
    }
}
