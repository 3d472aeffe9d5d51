//! Tabular reports and their table, CSV and JSON renderings.

use std::io::Write;

use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// One report cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    /// Small integer parameter, a JSON number.
    Int(i64),
    /// Exact count of any size, a JSON string of digits.
    Count(String),
    /// Exact fraction `a/b` or decimal text, a JSON string.
    Text(String),
    Bool(bool),
    /// Nested JSON; rendered compactly in tables and omitted from CSV.
    Json(Value),
    Empty,
}

impl Cell {
    fn plain(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Count(s) | Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Json(v) => v.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Count(s) | Cell::Text(s) => Value::from(s.clone()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Json(v) => v.clone(),
            Cell::Empty => Value::Null,
        }
    }
}

pub struct Column {
    pub name: &'static str,
    /// Whether the column is part of the CSV schema.
    pub csv: bool,
}

pub fn col(name: &'static str) -> Column {
    Column { name, csv: true }
}

/// A column shown in tables and JSON only.
pub fn extra(name: &'static str) -> Column {
    Column { name, csv: false }
}

pub struct Report {
    pub command: &'static str,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    /// For a one-row report, print only this column in table format.
    pub scalar: Option<&'static str>,
    /// Significant digits of the decimal cells, reported as `"digits"` in JSON.
    pub digits: Option<usize>,
}

impl Report {
    pub fn new(command: &'static str, columns: Vec<Column>) -> Report {
        Report { command, columns, rows: Vec::new(), scalar: None, digits: None }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Table => self.table(out),
            Format::Csv => self.csv(out),
            Format::Json => self.json(out),
        }
    }

    fn table(&self, out: &mut dyn Write) -> std::io::Result<()> {
        if let (Some(name), 1) = (self.scalar, self.rows.len()) {
            let i = self.columns.iter().position(|c| c.name == name).expect("scalar column exists");
            return writeln!(out, "{}", self.rows[0][i].plain());
        }
        let keep: Vec<usize> = (0..self.columns.len())
            .filter(|&i| self.rows.iter().any(|r| r[i] != Cell::Empty))
            .collect();
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| keep.iter().map(|&i| r[i].plain()).collect()).collect();
        let widths: Vec<usize> = keep
            .iter()
            .enumerate()
            .map(|(j, &i)| cells.iter().map(|r| r[j].len()).chain([self.columns[i].name.len()]).max().unwrap_or(0))
            .collect();
        let line = |fields: Vec<&str>| {
            let padded: Vec<String> = fields.iter().zip(&widths).map(|(f, w)| format!("{f:<w$}")).collect();
            padded.join("  ").trim_end().to_string()
        };
        writeln!(out, "{}", line(keep.iter().map(|&i| self.columns[i].name).collect()))?;
        for r in &cells {
            writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
        }
        Ok(())
    }

    fn csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let idx: Vec<usize> = (0..self.columns.len()).filter(|&i| self.columns[i].csv).collect();
        let mut w = csv::Writer::from_writer(out);
        w.write_record(idx.iter().map(|&i| self.columns[i].name))?;
        for r in &self.rows {
            w.write_record(idx.iter().map(|&i| r[i].plain()))?;
        }
        w.flush()
    }

    /// `{"command": ..., "digits": ..., "rows": [...]}` with keys in sorted order.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (c, v) in self.columns.iter().zip(r) {
                    m.insert(c.name.to_string(), v.json());
                }
                Value::Object(m)
            })
            .collect();
        let mut top = Map::new();
        top.insert("command".into(), Value::from(self.command));
        if let Some(d) = self.digits {
            top.insert("digits".into(), Value::from(d));
        }
        top.insert("rows".into(), Value::Array(rows));
        Value::Object(top)
    }

    fn json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
        writeln!(out)
    }
}
