//! Artifact writers. CSV: one header line, `,` delimiter, `.` decimal,
//! floats in shortest round-trip form (at most 17 significant digits).

use std::path::Path;

use serde_json::Value;

use crate::cli::config::Format;
use crate::error::{Result, WhmcError};

/// One CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Text(String),
    /// Written as an empty field.
    Absent,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Absent, Cell::Float)
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        // drop the sign of -0.0 so equal values print identically
        return "0.0".into();
    }
    format!("{x:?}")
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Absent => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io = |e: csv::Error| WhmcError::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| WhmcError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| WhmcError::Io(e.to_string()))
    }
}

/// What a command produces: a table for CSV output and a richer JSON
/// document.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub table: Table,
    pub json: Value,
}

impl Artifact {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.table.to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json)
                    .map_err(|e| WhmcError::Io(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
        }
    }

    pub fn write(&self, path: &Path, format: Format) -> Result<()> {
        let text = self.render(format)?;
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, text)?;
        Ok(())
    }
}
