use std::io::Write;

use serde_json::{Map, Value};

use crate::args::{Format, Precision};
use crate::error::CliError;

/// Rows of named cells; rendered as CSV or as JSON objects.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn objects(&self) -> Vec<Value> {
        self.rows
            .iter()
            .map(|r| {
                Value::Object(
                    self.columns
                        .iter()
                        .cloned()
                        .zip(r.iter().cloned())
                        .collect::<Map<_, _>>(),
                )
            })
            .collect()
    }
}

/// Everything a command prints.
pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub table: Table,
    /// Render the single row as an object rather than an array.
    pub single: bool,
    pub notes: Vec<String>,
    /// Printed in full, then reported through the exit status.
    pub failure: Option<CliError>,
}

/// A finite number rounded to the requested significant digits; non-finite
/// values become the strings `inf`, `-inf`, `nan`.
pub fn num(x: f64, precision: Precision) -> Value {
    if !x.is_finite() {
        let s = if x.is_nan() {
            "nan"
        } else if x > 0.0 {
            "inf"
        } else {
            "-inf"
        };
        return Value::String(s.into());
    }
    let rounded = match precision {
        Precision::Full => x,
        Precision::Digits(d) => format!("{:.*e}", d as usize - 1, x).parse().expect("formatted float"),
    };
    serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

pub fn opt_num(x: Option<f64>, precision: Precision) -> Value {
    x.map_or(Value::Null, |v| num(v, precision))
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        Value::Number(n) => n.as_f64().map_or_else(|| n.to_string(), |f| format!("{f}")),
        other => other.to_string(),
    }
}

impl Report {
    pub fn write<W: Write>(&self, mut w: W, format: Format) -> std::io::Result<()> {
        match format {
            Format::Json => {
                let result = if self.single {
                    self.table.objects().into_iter().next().unwrap_or(Value::Null)
                } else {
                    Value::Array(self.table.objects())
                };
                let doc = serde_json::json!({
                    "command": self.command,
                    "config": self.config,
                    "result": result,
                    "notes": self.notes,
                });
                serde_json::to_writer_pretty(&mut w, &doc)?;
                writeln!(w)
            }
            Format::Csv => {
                writeln!(w, "# command: {}", self.command)?;
                writeln!(w, "# config: {}", self.config)?;
                for n in &self.notes {
                    writeln!(w, "# note: {n}")?;
                }
                writeln!(w, "{}", self.table.columns.join(","))?;
                for row in &self.table.rows {
                    let cells: Vec<String> = row.iter().map(csv_cell).collect();
                    writeln!(w, "{}", cells.join(","))?;
                }
                Ok(())
            }
        }
    }
}
