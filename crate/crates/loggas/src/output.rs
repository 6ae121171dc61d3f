//! Tables and JSON documents produced by a run.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => format_float(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| CliError::config(format!("csv encoding: {e}"));
        w.write_record(&self.header).map_err(fail)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv)).map_err(fail)?;
        }
        w.into_inner().map_err(|e| CliError::config(format!("csv encoding: {e}")))
    }

    /// Array of objects keyed by column name.
    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self.header.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    /// Encoded in the run's chosen format.
    Table(Table),
    /// Always written as JSON.
    Document(Value),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub stem: String,
    pub body: Body,
}

impl Artifact {
    pub fn table(stem: &str, table: Table) -> Self {
        Artifact { stem: stem.to_string(), body: Body::Table(table) }
    }

    pub fn document(stem: &str, value: Value) -> Self {
        Artifact { stem: stem.to_string(), body: Body::Document(value) }
    }

    pub fn file_name(&self, format: Format) -> String {
        match (&self.body, format) {
            (Body::Table(_), Format::Csv) => format!("{}.csv", self.stem),
            _ => format!("{}.json", self.stem),
        }
    }

    pub fn encode(&self, format: Format) -> Result<Vec<u8>> {
        match (&self.body, format) {
            (Body::Table(t), Format::Csv) => t.to_csv(),
            (Body::Table(t), Format::Json) => pretty(&t.to_json()),
            (Body::Document(v), _) => pretty(v),
        }
    }
}

pub fn pretty(value: &Value) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::config(format!("json encoding: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes every artifact into `dir` and returns the file names in order.
pub fn write_artifacts(dir: &Path, artifacts: &[Artifact], format: Format) -> Result<Vec<String>> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut names = Vec::with_capacity(artifacts.len());
    for a in artifacts {
        let name = a.file_name(format);
        let path = dir.join(&name);
        fs::write(&path, a.encode(format)?).map_err(|e| CliError::io(&path, e))?;
        names.push(name);
    }
    Ok(names)
}
