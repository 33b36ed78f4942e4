//! Report rendering.
//!
//! Every report carries the tool version and the merged run configuration.
//! JSON output is one envelope object:
//!
//! ```json
//! {"tool": "sprime", "version": "0.1.0", "command": "nu", "config": {...}, "result": {...}}
//! ```
//!
//! Table and CSV output start with two comment lines,
//! `# sprime <version> <command>` and `# config: <config as JSON>`, followed
//! by the rows. Exact rationals appear in JSON as `{"exact": "p/q", "value": f64}`
//! and in tables as a `p/q` column next to a decimal column.

use std::io::Write;

use serde_json::{json, Value};
use sprime_core::rational::{self, Rational};
use sprime_core::spectrum::JointEigenvalue;

use crate::config::{Format, RunConfig};
use crate::error::CliError;

pub const TOOL: &str = "sprime";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn exact(r: &Rational) -> Value {
    json!({ "exact": rational::to_exact(r), "value": rational::to_f64(r) })
}

pub fn decimal(r: &Rational) -> String {
    format!("{}", rational::to_f64(r))
}

pub fn levels_text(levels: &[u32]) -> String {
    levels
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

pub fn components_text(components: &[Rational]) -> String {
    components
        .iter()
        .map(rational::to_exact)
        .collect::<Vec<_>>()
        .join(";")
}

pub fn mode_json(mode: &JointEigenvalue) -> Value {
    json!({
        "levels": mode.levels,
        "components": mode.components.iter().map(exact).collect::<Vec<_>>(),
        "total": exact(&mode.total),
        "multiplicity": mode.multiplicity,
    })
}

pub fn opt_f64(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x}"))
}

/// Rows shared by the table and CSV renderers.
#[derive(Debug, Clone, Default, PartialEq)]
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

    pub fn push<S: Into<String>>(&mut self, row: impl IntoIterator<Item = S>) {
        let row: Vec<String> = row.into_iter().map(Into::into).collect();
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    /// Left-aligned columns separated by two spaces; trailing blanks trimmed.
    pub fn render_aligned(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let mut s = String::new();
            for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
                if i > 0 {
                    s.push_str("  ");
                }
                s.push_str(cell);
                s.extend(std::iter::repeat_n(' ', w - cell.chars().count()));
            }
            s.trim_end().to_string()
        };
        let mut out = line(&self.headers);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }

    pub fn render_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).expect("in-memory csv");
        for row in &self.rows {
            w.write_record(row).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 cells")
    }
}

/// A finished command result in both renderings.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub result: Value,
    pub table: Table,
}

impl Report {
    pub fn render(&self, config: &RunConfig) -> String {
        let config_json = serde_json::to_value(config).expect("config serializes");
        match config.format {
            Format::Json => {
                let envelope = json!({
                    "tool": TOOL,
                    "version": VERSION,
                    "command": self.command,
                    "config": config_json,
                    "result": self.result,
                });
                let mut s = serde_json::to_string_pretty(&envelope).expect("json");
                s.push('\n');
                s
            }
            Format::Table | Format::Csv => {
                let mut s = format!(
                    "# {TOOL} {VERSION} {}\n# config: {config_json}\n",
                    self.command
                );
                s.push_str(&match config.format {
                    Format::Csv => self.table.render_csv(),
                    _ => self.table.render_aligned(),
                });
                s
            }
        }
    }
}

/// Writes to `config.out` when set, otherwise to `stdout`.
pub fn emit(text: &str, config: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &config.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {path}: {e}"))),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}
