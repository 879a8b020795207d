use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};
use crate::error::{CliError, CliResult};

pub const VERSION: &str = concat!("pseudoatom ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    /// Shown with `decimals` places in text formats, full precision in JSON.
    Num { value: f64, decimals: usize },
    Bool(bool),
    Empty,
}

impl Cell {
    pub fn num(value: f64, decimals: usize) -> Self {
        Cell::Num { value, decimals }
    }

    pub fn opt(value: Option<f64>, decimals: usize) -> Self {
        value.map_or(Cell::Empty, |v| Cell::num(v, decimals))
    }

    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn display(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Num { value, decimals } => format!("{value:.decimals$}"),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Int(i) => Value::from(*i),
            Cell::Num { value, .. } => Value::from(*value),
            Cell::Bool(b) => Value::from(*b),
            Cell::Empty => Value::Null,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num { value, .. } => Some(*value),
            Cell::Int(i) => Some(*i as f64),
            _ => None,
        }
    }
}

/// A finished command result. Built completely before anything is written.
#[derive(Debug, Clone)]
pub struct Table {
    pub command: &'static str,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<String>,
    /// Additional structured payload for JSON output.
    pub extra: Option<(String, Value)>,
}

impl Table {
    pub fn new(command: &'static str, columns: &[&str]) -> Self {
        Self {
            command,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
            extra: None,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn render(&self, config: &RunConfig) -> CliResult<String> {
        match config.format {
            Format::Csv => self.csv(config),
            Format::Json => self.json(config),
            Format::Pretty => Ok(self.pretty(config)),
        }
    }

    fn preamble(&self, config: &RunConfig) -> CliResult<Vec<String>> {
        let cfg = serde_json::to_string(config).map_err(|e| CliError::Io(e.to_string()))?;
        let mut lines = vec![
            format!("# {VERSION} {}", self.command),
            format!("# config: {cfg}"),
        ];
        lines.extend(self.notes.iter().map(|n| format!("# note: {n}")));
        Ok(lines)
    }

    fn csv(&self, config: &RunConfig) -> CliResult<String> {
        let mut out = self.preamble(config)?.join("\n");
        out.push('\n');
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::display)).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        out.push_str(&String::from_utf8_lossy(&bytes));
        Ok(out)
    }

    fn json(&self, config: &RunConfig) -> CliResult<String> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.clone(), v.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut doc = json!({
            "version": VERSION,
            "command": self.command,
            "config": config,
            "columns": self.columns,
            "rows": rows,
            "notes": self.notes,
        });
        if let Some((key, value)) = &self.extra {
            doc[key.as_str()] = value.clone();
        }
        let mut s = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    fn pretty(&self, config: &RunConfig) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::display).collect())
            .collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|i| {
                cells
                    .iter()
                    .map(|r| r[i].len())
                    .chain([self.columns[i].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |items: &[String]| {
            items
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_owned()
        };
        let mut out: Vec<String> = self.preamble(config).unwrap_or_default();
        out.push(line(&self.columns));
        out.push(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
        out.extend(cells.iter().map(|r| line(r)));
        let mut s = out.join("\n");
        s.push('\n');
        s
    }
}
