use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Envelope printed by every command.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub version: &'static str,
    pub seed: Option<u64>,
    /// SHA-256 of each input, keyed by argument name.
    pub inputs: BTreeMap<String, String>,
    pub timings_ms: BTreeMap<String, f64>,
    pub result: Value,
}

/// What a command produced, before it is rendered.
pub struct Outcome {
    pub payload: Value,
    pub text: String,
    pub table: Table,
    /// Nonzero when the command ran but its verdict is a failure.
    pub failed: Option<String>,
}

#[derive(Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// Records inputs and phase timings while a command runs.
pub struct Recorder {
    pub seed: Option<u64>,
    inputs: BTreeMap<String, String>,
    timings: BTreeMap<String, f64>,
}

impl Recorder {
    pub fn new() -> Self {
        Recorder {
            seed: None,
            inputs: BTreeMap::new(),
            timings: BTreeMap::new(),
        }
    }

    pub fn input(&mut self, name: &str, bytes: &[u8]) {
        self.inputs.insert(name.to_string(), hex::encode(Sha256::digest(bytes)));
    }

    pub fn phase<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        let ms = start.elapsed().as_secs_f64() * 1e3;
        *self.timings.entry(name.to_string()).or_default() += ms;
        out
    }

    pub fn finish(self, command: &str, payload: Value) -> RunReport {
        RunReport {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION"),
            seed: self.seed,
            inputs: self.inputs,
            timings_ms: self.timings,
            result: payload,
        }
    }
}

pub fn render_csv(table: &Table) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
