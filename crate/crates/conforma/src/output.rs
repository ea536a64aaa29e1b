//! Output emission: human-readable table, stable CSV, or JSON.

use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// A computed result set: echoed inputs plus numeric rows.
pub struct Output {
    pub echo: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Output {
    pub fn new(columns: &[&str]) -> Self {
        Output {
            echo: Vec::new(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn echo(&mut self, key: &str, value: impl std::fmt::Display) {
        self.echo.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn emit<W: Write>(&self, format: Format, w: &mut W) -> std::io::Result<()> {
        match format {
            Format::Table => self.emit_table(w),
            Format::Csv => self.emit_csv(w),
            Format::Json => self.emit_json(w),
        }
    }

    fn emit_table<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        for (k, v) in &self.echo {
            writeln!(w, "# {k} = {v}")?;
        }
        writeln!(w, "{}", self.columns.join("  "))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            writeln!(w, "{}", cells.join("  "))?;
        }
        Ok(())
    }

    /// Fixed column order, 12 significant digits, newline-terminated rows.
    fn emit_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.11e}")).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    fn emit_json<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        let inputs: serde_json::Map<String, serde_json::Value> = self
            .echo
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        let doc = serde_json::json!({
            "inputs": inputs,
            "columns": self.columns,
            "rows": self.rows,
        });
        writeln!(w, "{doc}")
    }
}
