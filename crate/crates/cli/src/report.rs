//! Tabular reports rendered as CSV or as an aligned text table.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    /// Undefined value, e.g. a rate conditioned on a null event.
    Missing,
}

impl Cell {
    pub fn opt(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }

    /// 17 significant digits, so every value parses back to the same bits.
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) if x.is_nan() => "nan".into(),
            Cell::Num(x) if x.is_infinite() => if *x > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => csv_text(s),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn human(&self) -> String {
        match self {
            Cell::Num(x) if *x != 0.0 && x.is_finite() && !(1e-4..1e15).contains(&x.abs()) => {
                format!("{x:e}")
            }
            Cell::Num(x) => x.to_string(),
            Cell::Missing => "-".into(),
            Cell::Text(s) => s.clone(),
            other => other.csv(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::Int(n)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Table,
}

/// A header and rows of equal width.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// A single wide row built from `(column, value)` pairs.
    pub fn single<S: Into<String>>(pairs: impl IntoIterator<Item = (S, Cell)>) -> Self {
        let (header, row): (Vec<String>, Vec<Cell>) =
            pairs.into_iter().map(|(k, v)| (k.into(), v)).unzip();
        Self {
            header,
            rows: vec![row],
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Table => self.to_table(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.header.iter().map(|h| csv_text(h)).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// One row prints as `name  value` lines; several rows as aligned columns.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        if self.rows.len() == 1 {
            let width = self
                .header
                .iter()
                .map(|h| h.chars().count())
                .max()
                .unwrap_or(0);
            for (h, c) in self.header.iter().zip(&self.rows[0]) {
                let _ = writeln!(out, "{h:<width$}  {}", c.human());
            }
            return out;
        }
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(Cell::human).collect())
            .collect();
        let widths: Vec<usize> = self
            .header
            .iter()
            .enumerate()
            .map(|(j, h)| {
                cells
                    .iter()
                    .map(|r| r[j].chars().count())
                    .chain([h.chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let line = |fields: &[String]| {
            let padded: Vec<String> = fields
                .iter()
                .zip(&widths)
                .map(|(f, w)| format!("{f:>w$}"))
                .collect();
            padded.join("  ").trim_end().to_owned()
        };
        let _ = writeln!(out, "{}", line(&self.header));
        for r in &cells {
            let _ = writeln!(out, "{}", line(r));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_uses_seventeen_digits_and_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 1.8156288156288157] {
            let s = Cell::Num(x).csv();
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
        }
        assert_eq!(Cell::Num(0.5).csv(), "5.0000000000000000e-1");
    }

    #[test]
    fn csv_layout() {
        let mut r = Report::new(["a", "b,c"]);
        r.push(vec![Cell::Int(3), Cell::Missing]);
        r.push(vec![Cell::Bool(true), Cell::from("x\"y")]);
        assert_eq!(r.to_csv(), "a,\"b,c\"\n3,\ntrue,\"x\"\"y\"\n");
    }

    #[test]
    fn table_layouts() {
        let r = Report::single([("s", Cell::Num(1.5)), ("r_t", Cell::Missing)]);
        assert_eq!(r.to_table(), "s    1.5\nr_t  -\n");
        let mut r = Report::new(["n", "value"]);
        r.push(vec![Cell::Int(1), Cell::Num(0.25)]);
        r.push(vec![Cell::Int(10), Cell::Num(2.0)]);
        r.push(vec![Cell::Int(7), Cell::Num(-5.5e-17)]);
        assert_eq!(
            r.to_table(),
            " n     value\n 1      0.25\n10         2\n 7  -5.5e-17\n"
        );
    }
}
