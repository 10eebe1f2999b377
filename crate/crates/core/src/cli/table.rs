//! Column-named rows with fixed, locale-independent formatting.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

use super::config::Format;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cell {
    Real(f64),
    Int(usize),
    Bool(bool),
}

impl Cell {
    /// Reals in scientific notation with 12 significant digits.
    pub fn render(&self) -> String {
        match self {
            Cell::Real(x) => format!("{:.11e}", x + 0.0),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    pub fn as_f64(&self) -> f64 {
        match *self {
            Cell::Real(x) => x,
            Cell::Int(n) => n as f64,
            Cell::Bool(b) => b as u8 as f64,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    /// Appends a row, rejecting wrong widths and non-finite reals.
    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::DimensionMismatch {
                expected: self.columns.len(),
                found: row.len(),
            });
        }
        if let Some((i, _)) = row.iter().enumerate().find(|(_, c)| !c.as_f64().is_finite()) {
            return Err(Error::CheckFailed(format!(
                "column {} of row {} is not finite",
                self.columns[i],
                self.rows.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64()).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut s = String::from("[\n");
        for (k, row) in self.rows.iter().enumerate() {
            s.push_str("  {");
            for (i, (name, cell)) in self.columns.iter().zip(row).enumerate() {
                if i > 0 {
                    s.push_str(", ");
                }
                let _ = write!(s, "\"{name}\": {}", cell.render());
            }
            s.push('}');
            if k + 1 < self.rows.len() {
                s.push(',');
            }
            s.push('\n');
        }
        s.push_str("]\n");
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn write(&self, path: &Path, format: Format) -> std::io::Result<()> {
        std::fs::write(path, self.render(format))
    }
}
