//! Row-oriented output rendered either as aligned text or CSV. Both renderings
//! carry the same cell strings, so numbers agree digit for digit.

use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Two-column `quantity,value` table.
    pub fn key_value() -> Self {
        Self::new(["quantity", "value"])
    }

    pub fn push<S: ToString>(&mut self, cells: impl IntoIterator<Item = S>) {
        let row: Vec<String> = cells.into_iter().map(|c| c.to_string()).collect();
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn pair(&mut self, key: &str, value: impl ToString) {
        self.push([key.to_string(), value.to_string()]);
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(&self.headers)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_text<W: Write>(&self, mut writer: W) -> Result<()> {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
            padded.join("  ").trim_end().to_string()
        };
        writeln!(writer, "{}", line(&self.headers))?;
        for r in &self.rows {
            writeln!(writer, "{}", line(r))?;
        }
        Ok(())
    }

    pub fn write<W: Write>(&self, writer: W, format: Format) -> Result<()> {
        match format {
            Format::Text => self.write_text(writer),
            Format::Csv => self.write_csv(writer),
        }
    }
}

/// Empty cell for an undefined value.
pub fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_csv_carry_the_same_cells() {
        let mut t = Table::key_value();
        t.pair("tessac_musd_per_year", 314.25);
        t.pair("q_parking", 32);
        let mut text = Vec::new();
        let mut csv = Vec::new();
        t.write(&mut text, Format::Text).unwrap();
        t.write(&mut csv, Format::Csv).unwrap();
        let text = String::from_utf8(text).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert_eq!(csv, "quantity,value\ntessac_musd_per_year,314.25\nq_parking,32\n");
        for line in csv.lines() {
            let (k, v) = line.split_once(',').unwrap();
            assert!(text.lines().any(|l| l.starts_with(k) && l.ends_with(v)));
        }
    }
}
