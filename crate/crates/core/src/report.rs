//! Text rendering of anomaly tables: markdown, CSV and aligned plain text.

use std::fmt::Write as _;

use crate::anomaly::{AnomalyTable, CellEntry, TableKind};
use crate::exact_arith::PiValue;

pub const DEFAULT_DIGITS: usize = 6;

/// Float display digits: `HYPERZETA_PRECISION` if set to a positive integer,
/// otherwise [`DEFAULT_DIGITS`].
pub fn display_digits() -> usize {
    std::env::var("HYPERZETA_PRECISION")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|d| (1..=60).contains(d))
        .unwrap_or(DEFAULT_DIGITS)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TableFormat {
    Markdown,
    Csv,
    Plain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Label(String),
    Value { exact: String, float: String },
    Excluded,
}

impl Cell {
    pub fn from_value(value: &PiValue, digits: usize) -> Self {
        Cell::Value {
            exact: value.to_string(),
            float: value.to_decimal(digits),
        }
    }

    fn joined(&self) -> String {
        match self {
            Cell::Label(s) => s.clone(),
            Cell::Value { exact, float } => format!("{exact} = {float}"),
            Cell::Excluded => "excluded".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl OutputTable {
    /// Grid layout: one row per dimension, one column per form order.
    pub fn from_anomaly_table(table: &AnomalyTable, digits: usize) -> Self {
        let mut headers = vec!["n".to_string()];
        match table.kind {
            TableKind::Scalar => headers.push("conformal scalar".to_string()),
            _ => headers.extend(table.forms.iter().map(|p| format!("p={p}"))),
        }
        let rows = table
            .cells
            .chunks(table.forms.len().max(1))
            .map(|chunk| {
                let mut row = vec![Cell::Label(chunk[0].dimension.to_string())];
                row.extend(chunk.iter().map(|cell| match &cell.entry {
                    CellEntry::Value(r) => Cell::from_value(&r.value, digits),
                    CellEntry::Excluded(_) => Cell::Excluded,
                }));
                row
            })
            .collect();
        OutputTable { headers, rows }
    }

    pub fn render(&self, format: TableFormat) -> String {
        match format {
            TableFormat::Markdown => self.render_markdown(),
            TableFormat::Csv => self.render_csv(),
            TableFormat::Plain => self.render_plain(),
        }
    }

    fn render_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "| {} |", self.headers.join(" | "));
        let _ = writeln!(out, "|{}|", vec!["---"; self.headers.len()].join("|"));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::joined).collect();
            let _ = writeln!(out, "| {} |", cells.join(" | "));
        }
        out
    }

    /// Value columns expand to `<header> exact` and `<header> numeric`.
    fn render_csv(&self) -> String {
        let value_cols: Vec<bool> = (0..self.headers.len())
            .map(|c| self.rows.iter().any(|r| !matches!(r.get(c), Some(Cell::Label(_)))))
            .collect();
        let mut header = Vec::new();
        for (h, &is_value) in self.headers.iter().zip(&value_cols) {
            if is_value {
                header.push(format!("{h} exact"));
                header.push(format!("{h} numeric"));
            } else {
                header.push(h.clone());
            }
        }
        let mut out = header.join(",");
        out.push('\n');
        for row in &self.rows {
            let mut fields = Vec::new();
            for (cell, &is_value) in row.iter().zip(&value_cols) {
                match (cell, is_value) {
                    (Cell::Value { exact, float }, _) => {
                        fields.push(exact.clone());
                        fields.push(float.clone());
                    }
                    (Cell::Excluded, _) => {
                        fields.push("excluded".into());
                        fields.push("excluded".into());
                    }
                    (Cell::Label(s), true) => {
                        fields.push(s.clone());
                        fields.push(String::new());
                    }
                    (Cell::Label(s), false) => fields.push(s.clone()),
                }
            }
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    fn render_plain(&self) -> String {
        let text: Vec<Vec<String>> = std::iter::once(self.headers.clone())
            .chain(self.rows.iter().map(|r| r.iter().map(Cell::joined).collect()))
            .collect();
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|c| text.iter().map(|r| r.get(c).map_or(0, |s| s.len())).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in text {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        out
    }
}
