//! Tabular output shared by every command: CSV or a JSON array of objects
//! with the same keys, in the same order.

use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use num_bigint::BigInt;
use serde_json::{Map, Number, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Int(BigInt),
    Text(String),
    Bool(bool),
    Null,
}

impl Cell {
    pub fn int<T: Into<BigInt>>(v: T) -> Self {
        Cell::Int(v.into())
    }

    pub fn text<T: fmt::Display>(v: T) -> Self {
        Cell::Text(v.to_string())
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(n) => int_value(n),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Null => Value::Null,
        }
    }

    fn to_field(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Records {
    headers: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Records {
    pub fn new(headers: &[&'static str]) -> Self {
        Records {
            headers: headers.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.headers.len(), "row width");
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .headers
                        .iter()
                        .zip(row)
                        .map(|(k, v)| ((*k).to_owned(), v.to_json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn render(&self, format: Format) -> anyhow::Result<Vec<u8>> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.headers)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::to_field))?;
                }
                Ok(w.into_inner()?)
            }
            Format::Json => render_json(&self.to_json()),
        }
    }
}

/// A JSON number carrying every digit of `n`.
pub fn int_value(n: &BigInt) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("integer literal"))
}

pub fn render_json(v: &Value) -> anyhow::Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(v)?;
    out.push(b'\n');
    Ok(out)
}
