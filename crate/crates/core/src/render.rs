//! Output records and their text, JSON and CSV renderings.
//!
//! Every field is converted to a string once, when the record is built, so
//! all three formats carry identical numeric strings.

use std::fmt::Write;

use crate::characters::CharacterRecord;
use crate::error::{Result, ZetaError};
use crate::identities::IdentityCheck;
use crate::rapid::ValidationReport;
use crate::series::SeriesResult;

/// First line of every CSV output.
pub const CSV_VERSION_LINE: &str = "# zetaforge-csv v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

impl OutputFormat {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(ZetaError::Parse(format!("unknown format {other:?}"))),
        }
    }
}

/// Ordered `(column, value)` pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Record {
    fields: Vec<(String, String)>,
}

/// `f64` diagnostics (bounds, residuals) in scientific notation.
pub fn render_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.6e}")
    }
}

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn field(mut self, name: &str, value: impl ToString) -> Self {
        self.fields.push((name.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }

    pub fn columns(&self) -> Vec<&str> {
        self.fields.iter().map(|(k, _)| k.as_str()).collect()
    }

    pub fn from_series(r: &SeriesResult, precision_bits: u32) -> Self {
        Record::new()
            .field("formula_id", r.formula_id)
            .field("value", &r.value)
            .field("error_bound", render_f64(r.error_bound))
            .field("terms_used", r.terms_used)
            .field("precision_bits", precision_bits)
    }

    pub fn from_identity(c: &IdentityCheck, precision_bits: u32) -> Self {
        Record::new()
            .field("identity_id", c.identity_id)
            .field("s", &c.s)
            .field("terms", c.terms)
            .field("lhs", &c.lhs)
            .field("rhs", &c.rhs)
            .field("residual", render_f64(c.residual))
            .field("precision_bits", precision_bits)
            .field("note", c.note().unwrap_or(""))
    }

    pub fn from_character(c: &CharacterRecord) -> Self {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        Record::new()
            .field("modulus", c.modulus)
            .field("index", c.index)
            .field("conductor", c.conductor)
            .field("parity", c.parity)
            .field("primitive", c.primitive)
            .field("generators", join(&c.generators))
            .field("exponents", join(&c.exponents))
    }

    pub fn from_validation(r: &ValidationReport, precision_bits: u32) -> Self {
        let opt = |v: &Option<crate::ComplexScalar>| v.as_ref().map(ToString::to_string).unwrap_or_default();
        Record::new()
            .field("formula_id", r.formula_id)
            .field("m", r.params.m)
            .field("q", r.params.q.map(|q| q.to_string()).unwrap_or_default())
            .field("index", r.params.index.map(|i| i.to_string()).unwrap_or_default())
            .field("variant", &r.variant)
            .field("verdict", r.verdict)
            .field("printed_value", opt(&r.printed_value))
            .field("oracle_value", opt(&r.oracle_value))
            .field("abs_err", render_f64(r.abs_err))
            .field("rel_err", render_f64(r.rel_err))
            .field("corrected_value", opt(&r.corrected_value))
            .field("precision_bits", precision_bits)
    }
}

fn csv_escape(v: &str) -> String {
    if v.contains([',', '"', '\n']) {
        format!("\"{}\"", v.replace('"', "\"\""))
    } else {
        v.to_string()
    }
}

/// Renders `records` with the given column order. `columns` fixes the CSV
/// header, so an empty sweep still produces it.
pub fn render(records: &[Record], columns: &[&str], format: OutputFormat) -> String {
    let cell = |r: &Record, c: &str| r.get(c).unwrap_or("").to_string();
    let mut out = String::new();
    match format {
        OutputFormat::Json => {
            for r in records {
                let mut obj = serde_json::Map::new();
                for c in columns {
                    obj.insert(c.to_string(), serde_json::Value::String(cell(r, c)));
                }
                out.push_str(&serde_json::Value::Object(obj).to_string());
                out.push('\n');
            }
        }
        OutputFormat::Csv => {
            out.push_str(CSV_VERSION_LINE);
            out.push('\n');
            out.push_str(&columns.join(","));
            out.push('\n');
            for r in records {
                let row: Vec<String> = columns.iter().map(|c| csv_escape(&cell(r, c))).collect();
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        OutputFormat::Text => {
            if records.len() == 1 {
                let width = columns.iter().map(|c| c.len()).max().unwrap_or(0);
                for c in columns {
                    let v = cell(&records[0], c);
                    if !v.is_empty() {
                        let _ = writeln!(out, "{c:<width$}  {v}");
                    }
                }
            } else {
                let widths: Vec<usize> = columns
                    .iter()
                    .map(|c| records.iter().map(|r| cell(r, c).len()).fold(c.len(), usize::max))
                    .collect();
                let line = |cells: Vec<String>| {
                    cells
                        .iter()
                        .zip(&widths)
                        .map(|(v, w)| format!("{v:<w$}"))
                        .collect::<Vec<_>>()
                        .join("  ")
                        .trim_end()
                        .to_string()
                };
                out.push_str(&line(columns.iter().map(|c| c.to_string()).collect()));
                out.push('\n');
                for r in records {
                    out.push_str(&line(columns.iter().map(|c| cell(r, c)).collect()));
                    out.push('\n');
                }
            }
        }
    }
    out
}
