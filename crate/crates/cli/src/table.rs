//! Tabular output shared by all commands: CSV with full-precision numbers or
//! a JSON array of row objects.

use std::fmt::Write as _;

use hyperentropy::Hyperbolic;
use serde_json::{Map, Value};

use crate::args::{Basis, Format};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Num(f64),
    Int(usize),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // 17 significant digits: parses back to the same f64
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(n) => Value::from(*n),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Empty => Value::Null,
        }
    }
}

/// Rows under a fixed header. Hyperbolic columns are added as pairs whose
/// names and values follow the display basis.
pub struct Table {
    basis: Basis,
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(basis: Basis) -> Self {
        Table {
            basis,
            header: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn column(&mut self, name: &str) -> &mut Self {
        self.header.push(name.to_string());
        self
    }

    pub fn hyp_column(&mut self, prefix: &str) -> &mut Self {
        let (a, b) = match self.basis {
            Basis::Idempotent => ("e1", "e2"),
            Basis::UnitK => ("1", "k"),
        };
        self.header.push(format!("{prefix}_{a}"));
        self.header.push(format!("{prefix}_{b}"));
        self
    }

    /// The two cells of a hyperbolic value in the display basis.
    pub fn hyp(&self, x: Option<Hyperbolic>) -> [Cell; 2] {
        match (x, self.basis) {
            (None, _) => [Cell::Empty, Cell::Empty],
            (Some(x), Basis::Idempotent) => [Cell::Num(x.x1), Cell::Num(x.x2)],
            (Some(x), Basis::UnitK) => {
                let (a, b) = x.to_unit_k();
                [Cell::Num(a), Cell::Num(b)]
            }
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.header.join(",");
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    let _ = writeln!(out, "{}", cells.join(","));
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .header
                            .iter()
                            .cloned()
                            .zip(row.iter().map(Cell::json))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut out = serde_json::to_string_pretty(&rows).expect("plain values serialize");
                out.push('\n');
                out
            }
        }
    }
}
