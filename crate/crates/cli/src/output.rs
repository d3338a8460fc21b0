//! Deterministic CSV and JSON rendering.
//!
//! Numbers print in the shortest decimal form that round-trips the binary
//! value, so identical configurations produce byte-identical files. Run
//! metadata is segregated from the data table: `#`-prefixed lines ahead of
//! the CSV header, a separate object in JSON. No timestamps anywhere.

use crate::config::OutputFormat;
use serde_json::{json, Value};
use std::io::Write;
use std::path::Path;

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    /// Empty field (CSV) / null (JSON), e.g. a charge column outside the
    /// limit where the charge is conserved.
    Blank,
}

pub fn fmt_f64(v: f64) -> String {
    // Fold negative zero into zero so algebraically-zero entries print
    // uniformly.
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v}")
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => fmt_f64(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Blank => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => json!(if *v == 0.0 { 0.0 } else { *v }),
            Cell::Int(v) => json!(v),
            Cell::Blank => Value::Null,
        }
    }
}

/// A rendered result: ordered metadata plus a fixed-schema table.
#[derive(Debug, Clone)]
pub struct Document {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Document {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            metadata: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn meta_f64(&mut self, key: &str, value: f64) {
        self.metadata.push((key.to_string(), fmt_f64(value)));
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str("# ");
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(v);
            out.push('\n');
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let metadata: serde_json::Map<String, Value> = self
            .metadata
            .iter()
            .map(|(k, v)| (k.clone(), json!(v)))
            .collect();
        let mut data = serde_json::Map::new();
        for (i, col) in self.columns.iter().enumerate() {
            let series: Vec<Value> = self.rows.iter().map(|r| r[i].json()).collect();
            data.insert((*col).to_string(), Value::Array(series));
        }
        let doc = json!({
            "metadata": Value::Object(metadata),
            "columns": self.columns,
            "data": Value::Object(data),
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("static schema");
        text.push('\n');
        text
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

/// Write to the path, or stdout when no path is given.
pub fn emit(text: &str, output: Option<&Path>) -> std::io::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}
