//! One result shape for every subcommand, rendered as aligned text, CSV, or
//! line-delimited JSON.

use std::fmt::Write as _;

use anyhow::Result;
use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Csv,
    Jsonl,
}

/// A value plus whether it rests on the conjectural degree-3 constant.
/// Human output marks those with `'`; machine output keeps the raw value.
#[derive(Clone, Debug)]
pub struct Cell {
    pub value: Value,
    pub primed: bool,
}

impl Cell {
    pub fn primed(value: impl Into<Value>, primed: bool) -> Self {
        Cell {
            value: value.into(),
            primed,
        }
    }

    fn human(&self) -> String {
        let mut s = match &self.value {
            Value::String(s) => s.clone(),
            Value::Null => "-".to_string(),
            v => v.to_string(),
        };
        if self.primed {
            s.push('\'');
        }
        s
    }

    fn csv(&self) -> String {
        match &self.value {
            Value::String(s) => s.clone(),
            Value::Null => String::new(),
            v => v.to_string(),
        }
    }
}

impl<T: Into<Value>> From<T> for Cell {
    fn from(v: T) -> Self {
        Cell::primed(v, false)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Layout {
    /// `key: value` lines, one block per row.
    Record,
    Table,
}

#[derive(Clone, Debug)]
pub struct Report {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
    layout: Layout,
    /// Replaces the generated human rendering.
    text: Option<String>,
    /// Replaces the generated CSV.
    csv_text: Option<String>,
}

impl Report {
    pub fn record(fields: Vec<(&str, Cell)>) -> Self {
        let (columns, row): (Vec<String>, Vec<Cell>) =
            fields.into_iter().map(|(k, v)| (k.to_string(), v)).unzip();
        Report {
            columns,
            rows: vec![row],
            layout: Layout::Record,
            text: None,
            csv_text: None,
        }
    }

    pub fn table(columns: &[&str]) -> Self {
        Report {
            columns: columns.iter().map(ToString::to_string).collect(),
            rows: Vec::new(),
            layout: Layout::Table,
            text: None,
            csv_text: None,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn with_text(mut self, text: String) -> Self {
        self.text = Some(text);
        self
    }

    pub fn with_csv(mut self, csv: String) -> Self {
        self.csv_text = Some(csv);
        self
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Human => Ok(self.text.clone().unwrap_or_else(|| self.human())),
            Format::Csv => match &self.csv_text {
                Some(t) => Ok(t.clone()),
                None => self.csv(),
            },
            Format::Jsonl => Ok(self.jsonl()),
        }
    }

    fn human(&self) -> String {
        let mut out = String::new();
        match self.layout {
            Layout::Record => {
                let width = self
                    .columns
                    .iter()
                    .map(|c| c.chars().count())
                    .max()
                    .unwrap_or(0);
                for (i, row) in self.rows.iter().enumerate() {
                    if i > 0 {
                        out.push('\n');
                    }
                    for (c, cell) in self.columns.iter().zip(row) {
                        let pad = width - c.chars().count();
                        let _ = writeln!(out, "{c}:{} {}", " ".repeat(pad), cell.human());
                    }
                }
            }
            Layout::Table => {
                let cells: Vec<Vec<String>> = self
                    .rows
                    .iter()
                    .map(|r| r.iter().map(Cell::human).collect())
                    .collect();
                let widths: Vec<usize> = (0..self.columns.len())
                    .map(|j| {
                        cells
                            .iter()
                            .map(|r| r[j].chars().count())
                            .chain([self.columns[j].chars().count()])
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let line = |items: &[String]| {
                    let padded: Vec<String> = items
                        .iter()
                        .zip(&widths)
                        .map(|(s, &w)| format!("{s}{}", " ".repeat(w - s.chars().count())))
                        .collect();
                    padded.join("  ").trim_end().to_string()
                };
                let _ = writeln!(out, "{}", line(&self.columns));
                for r in &cells {
                    let _ = writeln!(out, "{}", line(r));
                }
            }
        }
        out
    }

    fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    fn jsonl(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let obj: Map<String, Value> = self
                .columns
                .iter()
                .cloned()
                .zip(row.iter().map(|c| c.value.clone()))
                .collect();
            let _ = writeln!(out, "{}", Value::Object(obj));
        }
        out
    }
}
