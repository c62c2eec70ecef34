use anyhow::Result;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::input::{Digest256, Input};

/// What every decision command prints. No timing, so reports are
/// reproducible byte for byte.
#[derive(Serialize)]
pub struct Report {
    command: String,
    inputs: Vec<Digest256>,
    verdict: String,
    #[serde(skip)]
    ok: bool,
    details: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, inputs: &Input) -> Self {
        Report {
            command: command.to_string(),
            inputs: inputs.digests.clone(),
            verdict: String::new(),
            ok: true,
            details: Map::new(),
        }
    }

    pub fn verdict(&mut self, v: &str, ok: bool) {
        self.verdict = v.to_string();
        self.ok = ok;
    }

    pub fn field(&mut self, key: &str, v: Value) {
        self.details.insert(key.to_string(), v);
    }

    /// Prints the report and returns the exit code.
    pub fn emit(&self, json: bool) -> Result<u8> {
        if json {
            println!("{}", serde_json::to_string_pretty(self)?);
        } else {
            println!("{}", self.verdict);
            for (k, v) in &self.details {
                match v {
                    Value::String(s) => println!("  {k}: {s}"),
                    other => println!("  {k}: {other}"),
                }
            }
        }
        Ok(if self.ok { 0 } else { 1 })
    }
}
