use std::fmt::Display;
use std::io::{self, Write};

/// Ordered key/value output. Human mode aligns keys in a column; porcelain
/// mode prints `key<TAB>value` and nothing else.
#[derive(Debug, Default)]
pub struct Report {
    rows: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Display) {
        self.rows.push((key.into(), value.to_string()));
    }

    pub fn write(&self, porcelain: bool, mut out: impl Write) -> io::Result<()> {
        if porcelain {
            for (k, v) in &self.rows {
                writeln!(out, "{k}\t{}", v.replace(['\t', '\n'], " "))?;
            }
            return Ok(());
        }
        let width = self.rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.rows {
            writeln!(out, "{k:<width$}  {v}")?;
        }
        Ok(())
    }
}
