//! Tables, run manifests and the files they are written to.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use super::config::Format;
use crate::error::{Error, Result};

/// A rectangular table. Numbers are rendered with `Display`, which gives
/// the shortest round-tripping decimal with a `.` separator.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for line in std::iter::once(&self.header).chain(&self.rows) {
            let cells: Vec<String> = line.iter().map(|c| csv_cell(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// An array of objects; numeric-looking cells become JSON numbers.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    let mut m = Map::new();
                    for (h, c) in self.header.iter().zip(r) {
                        m.insert(h.clone(), json_cell(c));
                    }
                    Value::Object(m)
                })
                .collect(),
        )
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json");
                s.push('\n');
                s
            }
        }
    }
}

/// Shorthand for building table rows.
pub fn cell<T: Display>(v: T) -> String {
    v.to_string()
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

fn json_cell(c: &str) -> Value {
    match c.parse::<f64>() {
        Ok(x) if x.is_finite() => {
            if let Ok(i) = c.parse::<i64>() {
                Value::from(i)
            } else {
                Value::from(x)
            }
        }
        _ => Value::from(c),
    }
}

/// One pass/fail verdict with the measured value and its threshold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: String,
    pub threshold: String,
    pub passed: bool,
}

impl Check {
    pub fn new(name: &str, value: impl Display, threshold: &str, passed: bool) -> Check {
        Check {
            name: name.to_string(),
            value: value.to_string(),
            threshold: threshold.to_string(),
            passed,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: {} (need {})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.threshold
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// The command line that reproduces this run.
    pub invocation: String,
    pub config_digest: String,
    pub version: String,
    pub seed: u64,
    pub outputs: Vec<PathBuf>,
    pub wall_clock_seconds: f64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl RunManifest {
    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// SHA-256 of the canonical JSON form of `value`.
pub fn digest<T: Serialize>(value: &T) -> String {
    let text = serde_json::to_string(value).expect("serializable config");
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

/// Writes each table to `dir/<name>.<ext>` and returns the paths.
pub fn write_tables(dir: &Path, format: Format, tables: &[(String, Table)]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let mut paths = Vec::with_capacity(tables.len());
    for (name, t) in tables {
        let path = dir.join(format!("{name}.{ext}"));
        fs::write(&path, t.render(format)).map_err(|e| io_err(&path, e))?;
        paths.push(path);
    }
    Ok(paths)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    fs::write(path, text).map_err(|e| io_err(path, e))
}
