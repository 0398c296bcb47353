//! Discrepancy ledger: one JSON record per line, one record per
//! `(formula_id, params, variant)` key, last writer wins.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::validation::{ValidationReport, Verdict};
use super::RapidParams;
use crate::error::{Result, ZetaError};
use crate::series::FormulaId;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerRecord {
    pub formula_id: FormulaId,
    pub params: RapidParams,
    pub variant: String,
    pub verdict: Verdict,
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
    /// seconds since the Unix epoch
    pub timestamp: u64,
}

impl LedgerRecord {
    fn same_outcome(&self, other: &LedgerRecord) -> bool {
        self.verdict == other.verdict && self.abs_err == other.abs_err && self.rel_err == other.rel_err
    }
}

type Key = (FormulaId, RapidParams, String);

#[derive(Debug, Clone, Default)]
pub struct Ledger {
    path: Option<PathBuf>,
    records: BTreeMap<Key, LedgerRecord>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn parse_lines(text: &str) -> Result<BTreeMap<Key, LedgerRecord>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: LedgerRecord = serde_json::from_str(line)
            .map_err(|e| ZetaError::Parse(format!("ledger line {}: {e}", i + 1)))?;
        out.insert((rec.formula_id, rec.params, rec.variant.clone()), rec);
    }
    Ok(out)
}

impl Ledger {
    pub fn in_memory() -> Self {
        Ledger::default()
    }

    /// Loads `path` if it exists; [`save`](Self::save) writes back to it.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let records = match fs::read_to_string(&path) {
            Ok(text) => parse_lines(&text)?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => BTreeMap::new(),
            Err(e) => return Err(e.into()),
        };
        Ok(Ledger {
            path: Some(path),
            records,
        })
    }

    pub fn get(&self, formula_id: FormulaId, params: &RapidParams, variant: &str) -> Option<&LedgerRecord> {
        self.records.get(&(formula_id, *params, variant.to_string()))
    }

    pub fn records(&self) -> impl Iterator<Item = &LedgerRecord> {
        self.records.values()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Stores the outcome of `report`. An unchanged outcome keeps its
    /// original timestamp so that reruns leave the file untouched.
    pub fn record(&mut self, report: &ValidationReport) {
        let now = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let mut rec = LedgerRecord {
            formula_id: report.formula_id,
            params: report.params,
            variant: report.variant.clone(),
            verdict: report.verdict,
            abs_err: finite(report.abs_err),
            rel_err: finite(report.rel_err),
            timestamp: now,
        };
        let key = (rec.formula_id, rec.params, rec.variant.clone());
        if let Some(old) = self.records.get(&key) {
            if old.same_outcome(&rec) {
                rec.timestamp = old.timestamp;
            }
        }
        self.records.insert(key, rec);
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for rec in self.records.values() {
            out.push_str(&serde_json::to_string(rec).expect("ledger record serializes"));
            out.push('\n');
        }
        out
    }

    /// Merges with whatever is on disk (this ledger's records win) and
    /// replaces the file atomically.
    pub fn save(&mut self) -> Result<()> {
        let Some(path) = self.path.clone() else {
            return Ok(());
        };
        if let Ok(text) = fs::read_to_string(&path) {
            let mut merged = parse_lines(&text)?;
            merged.append(&mut self.records);
            self.records = merged;
        }
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(self.to_jsonl().as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(())
    }
}
