//! Report rendering: every task produces one flat table plus run-level
//! metadata. CSV repeats the metadata on each row so records stand alone;
//! JSON hoists it to the top of a single document. All cells are integers,
//! booleans, or preformatted strings, so output is byte-deterministic.

use serde_json::{Map, Value};
use std::io::{self, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub enum Cell {
    U64(u64),
    Str(String),
    Bool(bool),
    Null,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::U64(n) => n.to_string(),
            Cell::Str(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::U64(n) => Value::from(*n),
            Cell::Str(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Null => Value::Null,
        }
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::U64(n)
    }
}

impl From<u32> for Cell {
    fn from(n: u32) -> Self {
        Cell::U64(n as u64)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::U64(n as u64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Str(s)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Str(s.to_string())
    }
}

pub struct Report {
    meta: Vec<(&'static str, Cell)>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new(meta: Vec<(&'static str, Cell)>, columns: Vec<&'static str>) -> Self {
        Report {
            meta,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let header: Vec<&str> = self
            .meta
            .iter()
            .map(|(k, _)| *k)
            .chain(self.columns.iter().copied())
            .collect();
        w.write_record(&header)?;
        for row in &self.rows {
            let record: Vec<String> = self
                .meta
                .iter()
                .map(|(_, v)| v.csv())
                .chain(row.iter().map(Cell::csv))
                .collect();
            w.write_record(&record)?;
        }
        w.flush()
    }

    fn write_json(&self, out: &mut dyn Write) -> io::Result<()> {
        let mut doc = Map::new();
        for (k, v) in &self.meta {
            doc.insert((*k).to_string(), v.json());
        }
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (k, v) in self.columns.iter().zip(row) {
                    obj.insert((*k).to_string(), v.json());
                }
                Value::Object(obj)
            })
            .collect();
        doc.insert("records".to_string(), Value::Array(records));
        let text = serde_json::to_string_pretty(&Value::Object(doc))?;
        out.write_all(text.as_bytes())?;
        out.write_all(b"\n")
    }
}
