//! Tabular command output rendered as CSV or JSON.

use std::io::{self, Write};

use entmom::sampler::format_f64;
use entmom::Rational;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Moments,
    Cumulants,
    DensityCurve,
    Histogram,
    Comparison,
    Samples,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Moments => "moments",
            Kind::Cumulants => "cumulants",
            Kind::DensityCurve => "density_curve",
            Kind::Histogram => "histogram",
            Kind::Comparison => "comparison",
            Kind::Samples => "samples",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Exact(Rational),
    Float(f64),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Exact(r) => r.to_string(),
            Cell::Float(v) => format_f64(*v),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Exact(r) => Value::String(r.to_string()),
            // Same digits as the CSV cell; non-finite values have no JSON form.
            Cell::Float(v) if v.is_finite() => {
                Value::Number(format_f64(*v).parse::<Number>().expect("finite float"))
            }
            Cell::Float(_) => Value::Null,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OutputRecord {
    pub kind: Kind,
    /// Ordered `(key, value)` pairs; the tool version is added on output.
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl OutputRecord {
    pub fn new(kind: Kind, columns: &[&str]) -> Self {
        OutputRecord {
            kind,
            metadata: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn header(&self) -> Vec<(String, String)> {
        let mut all = vec![
            ("version".to_string(), crate::VERSION.to_string()),
            ("kind".to_string(), self.kind.as_str().to_string()),
        ];
        all.extend(self.metadata.iter().cloned());
        all
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (k, v) in self.header() {
            writeln!(out, "# {k},{v}")?;
        }
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::text).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut meta = Map::new();
        for (k, v) in self.header() {
            meta.insert(k, Value::String(v));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let mut top = Map::new();
        top.insert("kind".into(), Value::String(self.kind.as_str().into()));
        top.insert("metadata".into(), Value::Object(meta));
        top.insert(
            "columns".into(),
            Value::Array(self.columns.iter().cloned().map(Value::String).collect()),
        );
        top.insert("rows".into(), Value::Array(rows));
        Value::Object(top)
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.to_json())?;
        writeln!(out)
    }
}
