//! Tabular results and their CSV / JSON serialization.

use std::io::Write;

use serde_json::{json, Map, Value};

use crate::args::Format;
use crate::error::CliResult;

pub const SCHEMA: &str = "dimer-fluorescence v1";

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(k) => k.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // non-finite values become null
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(k) => json!(k),
            Cell::Text(s) => json!(s),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(k) => Some(*k as f64),
            Cell::Text(_) => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(k: usize) -> Self {
        Cell::Int(k as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        Cell::Num(x.unwrap_or(f64::NAN))
    }
}

/// How `--plot` draws a table.
#[derive(Clone, Debug, PartialEq)]
pub enum PlotKind {
    Lines { x: usize, ys: Vec<usize>, log_x: bool, log_y: bool },
    /// Long-format map: `x`, `y` axis columns and a value column.
    Heatmap { x: usize, y: usize, z: usize, log_z: bool },
    None,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Run metadata, kept in insertion order.
    pub meta: Vec<(String, String)>,
    pub plot: PlotKind,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            meta: Vec::new(),
            plot: PlotKind::None,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn with_plot(mut self, plot: PlotKind) -> Self {
        self.plot = plot;
        self
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> CliResult<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> CliResult<()> {
        writeln!(out, "# {SCHEMA}")?;
        writeln!(out, "# table={}", self.name)?;
        for (k, v) in &self.meta {
            writeln!(out, "# {k}={v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns).map_err(csv_io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(csv_io)?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_json(&self, out: &mut dyn Write) -> CliResult<()> {
        let mut meta = Map::new();
        for (k, v) in &self.meta {
            meta.insert(k.clone(), json!(v));
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let doc = json!({
            "schema": SCHEMA,
            "table": self.name,
            "meta": meta,
            "columns": self.columns,
            "rows": rows,
        });
        serde_json::to_writer_pretty(&mut *out, &doc).map_err(std::io::Error::from)?;
        writeln!(out)?;
        Ok(())
    }
}

/// Shortest round-trip form; exponent notation outside `[1e-4, 1e15)`.
fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if x.is_finite() && a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn csv_io(e: csv::Error) -> std::io::Error {
    std::io::Error::other(e)
}
