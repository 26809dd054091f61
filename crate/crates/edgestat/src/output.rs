//! Tables, reports and manifests. Nothing written here depends on time,
//! thread count or output location, so reruns are byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const CSV_VERSION: &str = "edgestat-csv v1";
pub const MANIFEST_SCHEMA: &str = "edgestat-manifest v1";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Real(f64),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => real_text(*x),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Real(x) => json!(x),
        }
    }
}

/// Shortest round-trip text, in exponent form away from moderate magnitudes.
pub fn real_text(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e16).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        Cell::Int(i)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// A rectangular table with a schema name and header metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub schema: String,
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(schema: &str, columns: &[&str]) -> Self {
        Table {
            schema: schema.into(),
            meta: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.into(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[j] {
                    Cell::Int(i) => i as f64,
                    Cell::Real(x) => x,
                })
                .collect(),
        )
    }

    /// CSV with `#` header lines: the schema version, then one `key=value` per line.
    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut head = format!("# {CSV_VERSION} {}\n", self.schema);
        for (k, v) in &self.meta {
            let _ = writeln!(head, "# {k}={v}");
        }
        let mut w = csv::Writer::from_writer(head.into_bytes());
        w.write_record(&self.columns).map_err(io_csv)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::text)).map_err(io_csv)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn to_json(&self) -> Vec<u8> {
        let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect()))
            .collect();
        let v = json!({
            "version": CSV_VERSION,
            "schema": self.schema,
            "meta": meta,
            "columns": self.columns,
            "rows": rows,
        });
        pretty(&v)
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(self.to_json()),
        }
    }
}

fn io_csv(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

pub fn pretty(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(v).expect("json values always serialize");
    s.push(b'\n');
    s
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Files produced by one command, written together with a manifest.
#[derive(Debug, Default)]
pub struct Outputs {
    files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    pub fn add(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.files.push((name.into(), bytes));
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, b)| b.as_slice())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|(n, _)| n.as_str())
    }

    pub fn hashes(&self) -> Vec<Value> {
        self.files.iter().map(|(n, b)| json!({ "file": n, "sha256": sha256_hex(b) })).collect()
    }

    /// Writes every file plus `<stem>.manifest.json` into `dir`; returns the manifest path.
    pub fn write(&self, dir: &Path, stem: &str, recipe: &Recipe) -> Result<PathBuf, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        for (name, bytes) in &self.files {
            let p = dir.join(name);
            fs::write(&p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        }
        let manifest = json!({
            "schema": MANIFEST_SCHEMA,
            "tool": "edgestat",
            "version": env!("CARGO_PKG_VERSION"),
            "core_version": edgestat_core::VERSION,
            "command": recipe.command,
            "args": recipe.args,
            "params": recipe.params,
            "seeds": recipe.seeds,
            "outputs": self.hashes(),
        });
        let p = dir.join(format!("{stem}.manifest.json"));
        fs::write(&p, pretty(&manifest)).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        Ok(p)
    }
}

/// What a manifest needs to reproduce a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Recipe {
    pub command: String,
    /// Canonical argument list, without output location or thread count.
    pub args: Vec<String>,
    pub params: Value,
    pub seeds: Value,
}
