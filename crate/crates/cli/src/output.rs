//! Deterministic CSV/JSON emission.
//!
//! CSV: header row, one data row per record, `#` comment lines for footer
//! diagnostics, floats at 17 significant digits so parsing them back is
//! exact. JSON: one top-level object `{config, rows, footer}`; floats go
//! through serde_json's shortest round-trip encoding.

use std::io::Write;

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

/// One cell of a table row.
#[derive(Debug, Clone)]
pub enum Cell {
    Float(f64),
    OptFloat(Option<f64>),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Float(v) => fmt17(*v),
            Cell::OptFloat(Some(v)) => fmt17(*v),
            Cell::OptFloat(None) => String::new(),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(v) => json!(v),
            Cell::OptFloat(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

/// 17 significant digits; round-trips any f64 exactly.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Assembled command output.
pub struct Report {
    pub config: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub footer: Map<String, Value>,
}

impl Report {
    pub fn new(config: Value, columns: Vec<&'static str>) -> Self {
        Self {
            config,
            columns,
            rows: Vec::new(),
            footer: Map::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn footer_entry(&mut self, key: &str, value: Value) {
        self.footer.insert(key.to_string(), value);
    }

    pub fn write(&self, format: OutputFormat, mut out: impl Write) -> std::io::Result<()> {
        match format {
            OutputFormat::Csv => {
                writeln!(out, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
                for (key, value) in &self.footer {
                    writeln!(out, "# {key} = {}", footer_text(value))?;
                }
            }
            OutputFormat::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut obj = Map::new();
                        for (c, cell) in self.columns.iter().zip(row) {
                            obj.insert((*c).to_string(), cell.json());
                        }
                        Value::Object(obj)
                    })
                    .collect();
                let doc = json!({
                    "config": self.config,
                    "rows": rows,
                    "footer": Value::Object(self.footer.clone()),
                });
                serde_json::to_writer_pretty(&mut out, &doc)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

fn footer_text(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
