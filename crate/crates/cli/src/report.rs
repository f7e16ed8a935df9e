//! Output plumbing: stdout or file, with deterministic JSON encoding.

use anyhow::{Context, Result};
use pifinite::scalar::{Cyclotomic, ExactMatrix};
use std::path::PathBuf;

pub struct Output {
    target: Option<PathBuf>,
    buffer: String,
}

impl Output {
    pub fn new(target: Option<PathBuf>) -> Self {
        Output { target, buffer: String::new() }
    }

    pub fn line(&mut self, text: String) {
        self.buffer.push_str(&text);
        self.buffer.push('\n');
    }

    pub fn json(&mut self, value: serde_json::Value) {
        self.line(serde_json::to_string_pretty(&value).expect("serializable"));
    }

    pub fn finish(&mut self) -> Result<()> {
        match &self.target {
            Some(path) => std::fs::write(path, &self.buffer)
                .with_context(|| format!("writing {}", path.display())),
            None => {
                print!("{}", self.buffer);
                Ok(())
            }
        }
    }
}

/// The documented scalar encoding, approximation included.
pub fn scalar_json(value: &Cyclotomic) -> serde_json::Value {
    serde_json::to_value(value).expect("scalar encoding")
}

pub fn matrix_json(m: &ExactMatrix) -> serde_json::Value {
    let rows: Vec<Vec<serde_json::Value>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| scalar_json(&m[(i, j)])).collect())
        .collect();
    serde_json::json!(rows)
}

/// Comma-separated values with exact entries rendered as strings.
pub fn matrix_csv(m: &ExactMatrix) -> String {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| m[(i, j)].to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}
