//! Tables written as CSV (17 significant digits) or JSON (exact values as `p/q` strings).

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};
use vilenkin::rational::format_rational;
use vilenkin::{Cyclotomic, Result, Scalar};

use crate::config::Format;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    /// Exact value, kept as a string in both formats.
    Exact(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Text(s) | Cell::Exact(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Float(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Text(s) | Cell::Exact(s) => Value::from(s.clone()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Exact rendering of a value, when the mode keeps one.
pub trait ExactText {
    fn exact_text(&self) -> Option<String>;
}

impl ExactText for Cyclotomic {
    fn exact_text(&self) -> Option<String> {
        Some(match self.as_rational() {
            Some(r) => format_rational(&r),
            None => self.to_string(),
        })
    }
}

impl ExactText for num_complex::Complex64 {
    fn exact_text(&self) -> Option<String> {
        None
    }
}

/// `re`, `im` and, in exact mode, `exact` cells for a value.
pub fn value_cells<S: Scalar + ExactText>(v: &S) -> Vec<Cell> {
    let z = v.to_complex();
    let mut cells = vec![Cell::Float(z.re), Cell::Float(z.im)];
    if S::EXACT {
        cells.push(Cell::Exact(v.exact_text().unwrap_or_default()));
    }
    cells
}

pub fn value_columns<S: Scalar>() -> Vec<&'static str> {
    if S::EXACT {
        vec!["re", "im", "exact"]
    } else {
        vec!["re", "im"]
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Key/value lines reported alongside the table.
    pub summary: Vec<(String, Cell)>,
}

impl Table {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(columns: I) -> Self {
        Table { columns: columns.into_iter().map(Into::into).collect(), ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &str, value: impl Into<Cell>) {
        self.summary.push((key.to_string(), value.into()));
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).map_err(csv_error)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| vilenkin::Error::Io(std::io::Error::other(e.to_string())))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self, extra: Option<Value>) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().map(Cell::json)).collect()))
            .collect();
        let summary: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        let mut obj = Map::new();
        obj.insert("rows".into(), Value::Array(rows));
        obj.insert("summary".into(), Value::Object(summary));
        if let Some(extra) = extra {
            obj.insert("report".into(), extra);
        }
        Value::Object(obj)
    }

    pub fn summary_text(&self) -> String {
        self.summary.iter().map(|(k, v)| format!("{k}: {}\n", v.csv())).collect()
    }
}

fn csv_error(e: csv::Error) -> vilenkin::Error {
    vilenkin::Error::Io(std::io::Error::other(e.to_string()))
}

/// Write the table to `out` (or stdout). With an output file the summary goes to stdout,
/// otherwise to stderr so that stdout stays parseable.
pub fn emit(table: &Table, format: Format, out: Option<&Path>, extra: Option<Value>) -> Result<()> {
    let body = match format {
        Format::Csv => table.to_csv()?,
        Format::Json => serde_json::to_string_pretty(&table.to_json(extra))? + "\n",
    };
    match out {
        Some(path) => {
            std::fs::write(path, body)?;
            print!("{}", table.summary_text());
        }
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
            if format == Format::Csv {
                eprint!("{}", table.summary_text());
            }
        }
    }
    Ok(())
}
