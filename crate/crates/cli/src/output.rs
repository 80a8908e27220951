use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use quadsuite::grid::format_sci;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Named columns of reals, rendered as CSV or as a JSON array of flat
/// objects.
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.columns.join(",");
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|&v| format_sci(v)).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let items: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(k, &v)| (k.clone(), number(v)))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut s =
                    serde_json::to_string_pretty(&Value::Array(items)).expect("tables serialize");
                s.push('\n');
                s
            }
        }
    }
}

/// JSON has no NaN or infinities; those become `null`.
pub fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

/// A single flat record.
pub struct Record {
    fields: Vec<(String, Value)>,
}

impl Record {
    pub fn new() -> Self {
        Self { fields: Vec::new() }
    }

    pub fn real(mut self, key: &str, v: f64) -> Self {
        self.fields.push((key.to_string(), number(v)));
        self
    }

    pub fn int(mut self, key: &str, v: usize) -> Self {
        self.fields.push((key.to_string(), Value::from(v)));
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let keys: Vec<&str> = self.fields.iter().map(|(k, _)| k.as_str()).collect();
                let vals: Vec<String> = self
                    .fields
                    .iter()
                    .map(|(_, v)| match v {
                        Value::Number(n) if !n.is_i64() && !n.is_u64() => {
                            format_sci(n.as_f64().expect("finite"))
                        }
                        Value::Null => "nan".to_string(),
                        other => other.to_string(),
                    })
                    .collect();
                format!("{}\n{}\n", keys.join(","), vals.join(","))
            }
            Format::Json => {
                let obj: Map<String, Value> = self.fields.iter().cloned().collect();
                let mut s =
                    serde_json::to_string_pretty(&Value::Object(obj)).expect("records serialize");
                s.push('\n');
                s
            }
        }
    }
}

/// Writes to `path`, or to standard output when absent.
pub fn emit(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            w.write_all(text.as_bytes())?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()
        }
    }
}
