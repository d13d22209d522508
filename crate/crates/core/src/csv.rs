//! Minimal numeric CSV with `# key=value` metadata lines.
//!
//! Values are written with `f64`'s shortest round-trip formatting, so
//! parsing a written table and writing it again reproduces the same bytes.

use std::fmt::Write as _;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvTable {
    pub meta: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            meta: Vec::new(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.push_meta(key, value);
        self
    }

    pub fn push_meta(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string();
        assert!(
            !key.contains('=') && !key.contains('\n') && !value.contains('\n'),
            "metadata must be single-line key=value"
        );
        self.meta.push((key.to_string(), value));
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.header.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut table = CsvTable::default();
        let mut have_header = false;
        for (lineno, line) in text.lines().enumerate() {
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim_start();
                let (k, v) = rest.split_once('=').ok_or_else(|| {
                    Error::InvalidParameter(format!("line {}: metadata without '='", lineno + 1))
                })?;
                table.meta.push((k.to_string(), v.to_string()));
            } else if line.is_empty() {
                continue;
            } else if !have_header {
                table.header = line.split(',').map(str::to_string).collect();
                have_header = true;
            } else {
                let row = line
                    .split(',')
                    .map(|s| {
                        s.parse::<f64>().map_err(|_| {
                            Error::InvalidParameter(format!("line {}: bad number {s:?}", lineno + 1))
                        })
                    })
                    .collect::<Result<Vec<f64>>>()?;
                if row.len() != table.header.len() {
                    return Err(Error::Shape(format!(
                        "line {}: {} fields, header has {}",
                        lineno + 1,
                        row.len(),
                        table.header.len()
                    )));
                }
                table.rows.push(row);
            }
        }
        if !have_header {
            return Err(Error::InvalidParameter("missing header line".into()));
        }
        Ok(table)
    }
}

impl std::fmt::Display for CsvTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut out = String::new();
        for (k, v) in &self.meta {
            writeln!(out, "# {k}={v}")?;
        }
        writeln!(out, "{}", self.header.join(","))?;
        for row in &self.rows {
            let mut first = true;
            for x in row {
                if !first {
                    out.push(',');
                }
                first = false;
                write!(out, "{x}")?;
            }
            out.push('\n');
        }
        f.write_str(&out)
    }
}
