use std::path::Path;

use serde_json::{Map, Value};

use crate::error::Result;
use crate::io::{float_value, format_f64, to_json_string};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Str(String),
    Int(i64),
    Float(f64),
    Bool(bool),
}

impl Cell {
    /// The CSV text; floats share the JSON formatting.
    pub fn text(&self) -> String {
        match self {
            Cell::Str(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(f) => format_f64(*f),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn value(&self) -> Value {
        match self {
            Cell::Str(s) => Value::String(s.clone()),
            Cell::Int(i) => Value::from(*i),
            Cell::Float(f) => float_value(*f),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Cell {
        Cell::Str(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Cell {
        Cell::Str(s)
    }
}

impl From<f64> for Cell {
    fn from(f: f64) -> Cell {
        Cell::Float(f)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Cell {
        Cell::Int(i as i64)
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Cell {
        Cell::Int(i as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Cell {
        Cell::Bool(b)
    }
}

/// One checked inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub check: String,
    /// The operation whose output is checked.
    pub operation: String,
    /// The inequality, written as `value REL bound`.
    pub inequality: String,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
    /// Quantified over an empty set of pairs.
    pub vacuous: bool,
}

impl Verdict {
    pub fn new(check: &str, operation: &str, inequality: &str, value: f64, bound: f64, passed: bool) -> Verdict {
        Verdict {
            check: check.into(),
            operation: operation.into(),
            inequality: inequality.into(),
            value,
            bound,
            passed,
            vacuous: false,
        }
    }

    pub fn vacuous(mut self, v: bool) -> Verdict {
        self.vacuous = v;
        if v {
            self.passed = true;
        }
        self
    }

    pub fn note(&self) -> &'static str {
        if self.vacuous {
            "vacuous"
        } else {
            ""
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    /// Key/value run metadata, in insertion order.
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub verdicts: Vec<Verdict>,
}

pub const VERDICT_COLUMNS: [&str; 8] = ["check", "operation", "inequality", "value", "bound", "passed", "vacuous", "note"];

impl Report {
    pub fn new(columns: &[&str]) -> Report {
        Report { columns: columns.iter().map(|c| c.to_string()).collect(), ..Report::default() }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn push_verdict(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text))?;
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("UTF-8 cells"))
    }

    /// The verdicts as a table with [`VERDICT_COLUMNS`].
    pub fn verdicts_csv(&self) -> Result<String> {
        let mut t = Report::new(&VERDICT_COLUMNS);
        for v in &self.verdicts {
            t.push_row(verdict_row(v));
        }
        t.to_csv()
    }

    pub fn to_json(&self) -> String {
        let mut meta = Map::new();
        for (k, v) in &self.metadata {
            meta.insert(k.clone(), Value::String(v.clone()));
        }
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::value).collect())).collect();
        let verdicts: Vec<Value> = self
            .verdicts
            .iter()
            .map(|v| {
                let mut m = Map::new();
                for (k, c) in VERDICT_COLUMNS.iter().zip(verdict_row(v)) {
                    m.insert(k.to_string(), c.value());
                }
                Value::Object(m)
            })
            .collect();
        let mut m = Map::new();
        m.insert("metadata".into(), Value::Object(meta));
        m.insert("columns".into(), self.columns.iter().map(|c| Value::from(c.clone())).collect());
        m.insert("rows".into(), Value::Array(rows));
        m.insert("verdicts".into(), Value::Array(verdicts));
        m.insert("passed".into(), Value::Bool(self.passed()));
        to_json_string(&Value::Object(m))
    }

    /// Writes CSV and/or JSON; parent directories must exist.
    pub fn emit(&self, csv_path: Option<&Path>, json_path: Option<&Path>) -> Result<()> {
        if let Some(p) = csv_path {
            std::fs::write(p, self.to_csv()?)?;
        }
        if let Some(p) = json_path {
            std::fs::write(p, self.to_json())?;
        }
        Ok(())
    }
}

pub(crate) fn verdict_row(v: &Verdict) -> Vec<Cell> {
    vec![
        v.check.as_str().into(),
        v.operation.as_str().into(),
        v.inequality.as_str().into(),
        v.value.into(),
        v.bound.into(),
        v.passed.into(),
        v.vacuous.into(),
        v.note().into(),
    ]
}
