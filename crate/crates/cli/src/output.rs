use std::io::Write;

use num_rational::BigRational;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::CliError;

/// One table cell. Exact values travel as `num/den` strings.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Exact(String),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn exact(x: &BigRational) -> Cell {
        Cell::Exact(format!("{}/{}", x.numer(), x.denom()))
    }

    pub fn int(x: usize) -> Cell {
        Cell::Int(x as i64)
    }

    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Exact(s) | Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }

    /// CSV text; floats use the same shortest round-trip form as JSON.
    fn to_csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) if v.is_finite() => Value::from(*v).to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Exact(s) | Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&'static str]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "table {}", self.name);
        self.rows.push(row);
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let mut m = Map::new();
                    for (c, v) in self.columns.iter().zip(row) {
                        m.insert((*c).to_string(), v.to_json());
                    }
                    Value::Object(m)
                })
                .collect(),
        )
    }
}

/// Result payload of a command, independent of run metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Body {
    pub passed: bool,
    pub tables: Vec<Table>,
}

impl Body {
    pub fn to_json(&self) -> Value {
        let mut tables = Map::new();
        for t in &self.tables {
            tables.insert(t.name.clone(), t.to_json());
        }
        let mut m = Map::new();
        m.insert("passed".into(), Value::Bool(self.passed));
        m.insert("tables".into(), Value::Object(tables));
        Value::Object(m)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: Value,
    pub seed: u64,
    pub workers: usize,
    pub started_at: String,
    pub finished_at: String,
    pub wall_clock_seconds: f64,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

pub fn render(format: Format, meta: &Metadata, body: &Body) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut m = Map::new();
            m.insert("metadata".into(), serde_json::to_value(meta)?);
            m.insert("body".into(), body.to_json());
            let mut out = serde_json::to_vec_pretty(&Value::Object(m))?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut out = Vec::new();
            writeln!(out, "# metadata {}", serde_json::to_string(meta)?)?;
            writeln!(out, "# passed {}", body.passed)?;
            for t in &body.tables {
                writeln!(out, "# table {}", t.name)?;
                let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
                w.write_record(&t.columns)?;
                for row in &t.rows {
                    w.write_record(row.iter().map(Cell::to_csv))?;
                }
                out.extend(w.into_inner().map_err(|e| CliError::Io(e.into_error()))?);
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_cells_are_fractions() {
        let x = BigRational::new((-1).into(), 24.into());
        assert_eq!(Cell::exact(&x), Cell::Exact("-1/24".into()));
        let z = BigRational::new(0.into(), 5.into());
        assert_eq!(Cell::exact(&z), Cell::Exact("0/1".into()));
    }

    #[test]
    fn float_text_matches_json() {
        for v in [0.1, 1e-7, 1.0, -2.5e300, 0.0625] {
            let c = Cell::Float(v);
            assert_eq!(c.to_csv(), c.to_json().to_string());
            assert_eq!(c.to_csv().parse::<f64>().unwrap(), v);
        }
        assert_eq!(Cell::Float(f64::NAN).to_json(), Value::Null);
    }
}
