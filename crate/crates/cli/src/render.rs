//! Output formats. JSON comes straight from serde; CSV and markdown are
//! rendered from a flat [`Sheet`].

use clap::ValueEnum;
use crowdfund::table::round_display;
use serde::Serialize;

use crate::failure::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Format as ValueEnum>::from_str(s, true)
            .map_err(|_| format!("format must be json, csv or markdown, got '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
    Empty,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

impl Cell {
    /// Full precision (shortest round-trip form for floats).
    fn exact(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn rounded(&self, decimals: u32) -> String {
        match self {
            Cell::Float(v) => fixed(*v, decimals),
            other => other.exact(),
        }
    }
}

/// `value` rounded half away from zero and printed with `decimals` places.
pub fn fixed(value: f64, decimals: u32) -> String {
    format!("{:.*}", decimals as usize, round_display(value, decimals))
}

/// A rectangular table of cells with a header row.
#[derive(Debug, Clone, Default)]
pub struct Sheet {
    pub title: Option<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Sheet {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            title: None,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn titled(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Failure::Internal(format!("csv encoding failed: {e}"));
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::exact)).map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Failure::Internal(format!("csv encoding failed: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Failure::Internal(e.to_string()))
    }

    pub fn to_markdown(&self, decimals: u32) -> String {
        let mut out = String::new();
        if let Some(title) = &self.title {
            out.push_str(title);
            out.push_str("\n\n");
        }
        out.push_str(&format!("| {} |\n", self.columns.join(" | ")));
        let rule: Vec<&str> = self.columns.iter().map(|_| "---").collect();
        out.push_str(&format!("| {} |\n", rule.join(" | ")));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.rounded(decimals)).collect();
            out.push_str(&format!("| {} |\n", cells.join(" | ")));
        }
        out
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Failure::Internal(format!("json encoding failed: {e}")))
}

/// Render in `format`, using `sheet` for the tabular formats.
pub fn render<T: Serialize>(
    format: Format,
    value: &T,
    sheet: impl FnOnce() -> Sheet,
    decimals: u32,
) -> Result<String, Failure> {
    match format {
        Format::Json => to_json(value),
        Format::Csv => sheet().to_csv(),
        Format::Markdown => Ok(sheet().to_markdown(decimals)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_rounds_half_away_from_zero() {
        assert_eq!(fixed(0.1015, 3), "0.102");
        assert_eq!(fixed(-0.0005, 3), "-0.001");
        assert_eq!(fixed(1.0, 3), "1.000");
    }

    #[test]
    fn csv_has_header_and_exact_values() {
        let mut s = Sheet::new(&["n", "lambda", "note"]);
        s.push(vec![10u64.into(), 0.1f64.into(), Cell::Empty]);
        assert_eq!(s.to_csv().unwrap(), "n,lambda,note\n10,0.1,\n");
    }

    #[test]
    fn markdown_rounds_floats_only() {
        let mut s = Sheet::new(&["n", "theta"]);
        s.push(vec![1000u64.into(), 0.83349f64.into()]);
        assert_eq!(s.to_markdown(3), "| n | theta |\n| --- | --- |\n| 1000 | 0.833 |\n");
    }
}
