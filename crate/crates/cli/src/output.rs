//! Machine-readable output records. Every command can emit one JSON object
//! (`--json`) echoing the command, its inputs, the result, and timing;
//! re-running the echoed command reproduces the same result.

use serde_json::{json, Map, Value};
use std::time::Instant;

pub const SCHEMA_VERSION: &str = "v1";

pub struct RecordBuilder {
    command: &'static str,
    inputs: Map<String, Value>,
    notes: Vec<String>,
    started: Instant,
}

impl RecordBuilder {
    pub fn new(command: &'static str) -> Self {
        RecordBuilder {
            command,
            inputs: Map::new(),
            notes: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn input(mut self, key: &str, value: impl ToString) -> Self {
        self.inputs.insert(key.to_string(), Value::String(value.to_string()));
        self
    }

    pub fn input_opt(self, key: &str, value: Option<impl ToString>) -> Self {
        match value {
            Some(v) => self.input(key, v),
            None => self,
        }
    }

    pub fn notes(mut self, notes: &[String]) -> Self {
        self.notes.extend_from_slice(notes);
        self
    }

    pub fn finish(self, result: Value) -> Value {
        json!({
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "inputs": Value::Object(self.inputs),
            "result": result,
            "notes": self.notes,
            "elapsed_ms": self.started.elapsed().as_millis() as u64,
        })
    }
}

/// Print a record as a single JSON line.
pub fn emit(record: &Value) {
    println!("{record}");
}
