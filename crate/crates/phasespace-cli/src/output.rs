//! CSV and JSON writers. Files are written to a temporary sibling and renamed
//! into place, so a failed run never leaves a partial file.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A table of finite numbers with a fixed header.
pub struct Table {
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &'static [&'static str]) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            for (k, v) in row.iter().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{v:e}");
            }
            s.push('\n');
        }
        s
    }

    fn to_json(&self) -> Value {
        json!({ "columns": self.columns, "rows": self.rows })
    }
}

/// Metadata document: family, params, hbar, grid, diagnostics, version.
pub struct Metadata {
    pub family: String,
    pub params: Map<String, Value>,
    pub hbar: f64,
    pub grid: Value,
    pub diagnostics: Map<String, Value>,
}

impl Metadata {
    pub fn new(family: impl Into<String>, hbar: f64, grid: Value) -> Self {
        Self { family: family.into(), params: Map::new(), hbar, grid, diagnostics: Map::new() }
    }

    pub fn param(&mut self, key: &str, v: impl Into<Value>) {
        self.params.insert(key.into(), v.into());
    }

    pub fn diag(&mut self, key: &str, v: impl Into<Value>) {
        self.diagnostics.insert(key.into(), v.into());
    }

    pub fn to_json(&self) -> Value {
        json!({
            "family": self.family,
            "params": self.params,
            "hbar": self.hbar,
            "grid": self.grid,
            "diagnostics": self.diagnostics,
            "version": env!("CARGO_PKG_VERSION"),
        })
    }
}

/// `rho.csv -> rho.meta.json`.
pub fn metadata_path(out: &Path) -> PathBuf {
    out.with_extension("meta.json")
}

pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("metadata is plain JSON");
    s.push('\n');
    s
}

/// CSV: table to `out` and metadata beside it, or the table to stdout.
/// JSON: one document holding both, to `out` or stdout.
pub fn emit(out: Option<&Path>, format: Format, table: &Table, meta: &Metadata) -> std::io::Result<()> {
    match (format, out) {
        (Format::Csv, Some(p)) => {
            write_atomic(p, &table.to_csv())?;
            write_atomic(&metadata_path(p), &pretty(&meta.to_json()))
        }
        (Format::Csv, None) => std::io::stdout().write_all(table.to_csv().as_bytes()),
        (Format::Json, _) => {
            let mut doc = meta.to_json();
            doc["data"] = table.to_json();
            emit_json(out, &doc)
        }
    }
}

pub fn emit_json(out: Option<&Path>, doc: &Value) -> std::io::Result<()> {
    match out {
        Some(p) => write_atomic(p, &pretty(doc)),
        None => std::io::stdout().write_all(pretty(doc).as_bytes()),
    }
}
