//! Reports and their text, CSV and JSON renderings.

use std::fmt::Display;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: &str = "carmichael-forms/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// One value in a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    /// Decimal integer of any size; a string in JSON.
    Num(String),
    /// A count; left blank in text tables when zero.
    Count(u64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    pub fn num(v: impl Display) -> Self {
        Cell::Num(v.to_string())
    }

    pub fn text(v: impl Display) -> Self {
        Cell::Text(v.to_string())
    }

    pub fn opt(v: Option<impl Display>) -> Self {
        v.map_or(Cell::Empty, |v| Cell::Num(v.to_string()))
    }

    fn plain(&self) -> String {
        match self {
            Cell::Num(s) | Cell::Text(s) => s.clone(),
            Cell::Count(c) => c.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn table_text(&self) -> String {
        match self {
            Cell::Count(0) => String::new(),
            _ => self.plain(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(s) | Cell::Text(s) => Value::String(s.clone()),
            Cell::Count(c) => Value::String(c.to_string()),
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Body {
    /// Named fields of a single result.
    Record(Vec<(String, Cell)>),
    /// Rows under fixed columns.
    Table {
        columns: Vec<String>,
        rows: Vec<Vec<Cell>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub body: Body,
}

impl Report {
    pub fn record(command: &str, inputs: Vec<(String, String)>, fields: Vec<(&str, Cell)>) -> Self {
        Self {
            command: command.into(),
            inputs,
            body: Body::Record(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect()),
        }
    }

    pub fn table(
        command: &str,
        inputs: Vec<(String, String)>,
        columns: &[&str],
        rows: Vec<Vec<Cell>>,
    ) -> Self {
        Self {
            command: command.into(),
            inputs,
            body: Body::Table {
                columns: columns.iter().map(|c| c.to_string()).collect(),
                rows,
            },
        }
    }

    /// Field lookup on record bodies, by plain rendering.
    pub fn field(&self, name: &str) -> Option<String> {
        match &self.body {
            Body::Record(fields) => fields.iter().find(|(k, _)| k == name).map(|(_, v)| v.plain()),
            Body::Table { .. } => None,
        }
    }

    /// Rows rendered as plain strings (counts as digits, never blank).
    pub fn plain_rows(&self) -> Vec<Vec<String>> {
        match &self.body {
            Body::Record(fields) => vec![fields.iter().map(|(_, v)| v.plain()).collect()],
            Body::Table { rows, .. } => rows
                .iter()
                .map(|r| r.iter().map(Cell::plain).collect())
                .collect(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_text(&self) -> String {
        match &self.body {
            Body::Record(fields) => {
                let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                fields
                    .iter()
                    .map(|(k, v)| format!("{k:<width$}  {}\n", v.plain()))
                    .collect()
            }
            Body::Table { columns, rows } => {
                if rows.is_empty() {
                    return "none\n".into();
                }
                let cells: Vec<Vec<String>> = rows
                    .iter()
                    .map(|r| r.iter().map(Cell::table_text).collect())
                    .collect();
                let widths: Vec<usize> = (0..columns.len())
                    .map(|i| {
                        cells
                            .iter()
                            .map(|r| r[i].chars().count())
                            .chain([columns[i].chars().count()])
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                // text columns are left-aligned, numeric ones right-aligned
                let left: Vec<bool> = (0..columns.len())
                    .map(|i| rows.iter().any(|r| matches!(r[i], Cell::Text(_))))
                    .collect();
                let line = |items: &[String]| {
                    let padded: Vec<String> = items
                        .iter()
                        .zip(widths.iter().zip(&left))
                        .map(|(s, (&w, &l))| if l { format!("{s:<w$}") } else { format!("{s:>w$}") })
                        .collect();
                    format!("{}\n", padded.join("  ").trim_end())
                };
                let mut out = line(columns);
                for r in &cells {
                    out.push_str(&line(r));
                }
                out
            }
        }
    }

    fn render_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        match &self.body {
            Body::Record(fields) => {
                w.write_record(fields.iter().map(|(k, _)| k.as_str())).expect("in-memory write");
                w.write_record(fields.iter().map(|(_, v)| v.plain())).expect("in-memory write");
            }
            Body::Table { columns, rows } => {
                w.write_record(columns).expect("in-memory write");
                for r in rows {
                    w.write_record(r.iter().map(Cell::plain)).expect("in-memory write");
                }
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    pub fn to_json(&self) -> Value {
        let inputs: Map<String, Value> = self
            .inputs
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let result = match &self.body {
            Body::Record(fields) => Value::Object(
                fields.iter().map(|(k, v)| (k.clone(), v.json())).collect(),
            ),
            Body::Table { columns, rows } => Value::Array(
                rows.iter()
                    .map(|r| {
                        Value::Object(
                            columns.iter().cloned().zip(r.iter().map(Cell::json)).collect(),
                        )
                    })
                    .collect(),
            ),
        };
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs": inputs,
            "result": result,
        })
    }

    fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s
    }
}
