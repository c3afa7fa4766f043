//! Output formatting: the JSON value envelope and the CSV table format
//! (17-significant-digit floats, '#'-prefixed metadata lines, header row).

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::run::CliError;

/// One evaluated value: the envelope every `eval` target emits.
#[derive(Serialize)]
pub struct Envelope {
    pub target: String,
    pub params: Vec<(String, f64)>,
    pub value: f64,
    pub abs_err: f64,
    pub method: String,
    pub terms: usize,
}

/// 17 significant digits — enough to round-trip any f64 bit pattern.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct Table {
    pub metadata: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for m in &self.metadata {
            out.push_str("# ");
            out.push_str(m);
            out.push('\n');
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| fmt17(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Parse a CSV produced by [`Table::to_csv`]; the round-trip invariant
    /// is `parse(t.to_csv()).rows == t.rows` exactly.
    pub fn parse(text: &str) -> Result<Table, CliError> {
        let mut metadata = Vec::new();
        let mut header = Vec::new();
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                metadata.push(rest.trim().to_string());
            } else if header.is_empty() {
                header = line.split(',').map(|s| s.trim().to_string()).collect();
            } else {
                let row: Result<Vec<f64>, _> = line.split(',').map(|s| s.trim().parse()).collect();
                rows.push(row.map_err(|e| {
                    CliError::validation(format!("unreadable CSV row `{line}`: {e}"))
                })?);
            }
        }
        if header.is_empty() {
            return Err(CliError::validation("CSV has no header row".into()));
        }
        Ok(Table {
            metadata,
            header,
            rows,
        })
    }
}

/// Write to the output path, or stdout when none is given.
pub fn emit(output: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match output {
        None => {
            print!("{text}");
            std::io::stdout()
                .flush()
                .map_err(|e| CliError::validation(format!("stdout: {e}")))
        }
        Some(path) => write_file(path, text),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::validation(format!("writing {}: {e}", path.display())))
}
