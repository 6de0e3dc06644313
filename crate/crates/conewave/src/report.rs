//! Structured check records and their JSON / CSV emission.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::Result;

/// One measured quantity with its pass flag and the discretization it came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub check: String,
    pub case: String,
    pub measured: f64,
    /// Threshold the measurement is held against, when there is one.
    pub limit: Option<f64>,
    pub passed: bool,
    pub provenance: String,
}

impl Record {
    pub fn new(
        check: impl Into<String>,
        case: impl Into<String>,
        measured: f64,
        provenance: impl Into<String>,
    ) -> Self {
        Self {
            check: check.into(),
            case: case.into(),
            measured,
            limit: None,
            passed: measured.is_finite(),
            provenance: provenance.into(),
        }
    }

    /// Passes when `measured <= limit`.
    pub fn at_most(
        check: impl Into<String>,
        case: impl Into<String>,
        measured: f64,
        limit: f64,
        provenance: impl Into<String>,
    ) -> Self {
        Self {
            check: check.into(),
            case: case.into(),
            measured,
            limit: Some(limit),
            passed: measured <= limit,
            provenance: provenance.into(),
        }
    }

    pub fn with_pass(mut self, passed: bool) -> Self {
        self.passed = passed;
        self
    }
}

/// Records and notes produced by one battery.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Outcome {
    pub records: Vec<Record>,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    /// Adds a note unless an identical one is already present.
    pub fn note(&mut self, s: impl Into<String>) {
        let s = s.into();
        if !self.notes.contains(&s) {
            self.notes.push(s);
        }
    }

    pub fn extend(&mut self, other: Outcome) {
        self.records.extend(other.records);
        for n in other.notes {
            self.note(n);
        }
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Versions {
    pub conewave: &'static str,
    pub conewave_core: &'static str,
}

impl Versions {
    pub fn current() -> Self {
        Self { conewave: env!("CARGO_PKG_VERSION"), conewave_core: conewave_core::VERSION }
    }
}

/// Deterministic report: identical inputs give byte-identical files.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub command: String,
    pub versions: Versions,
    pub config: ExperimentConfig,
    pub passed: bool,
    pub records: Vec<Record>,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn new(command: impl Into<String>, config: ExperimentConfig, outcome: Outcome) -> Self {
        Self {
            command: command.into(),
            versions: Versions::current(),
            config,
            passed: outcome.passed(),
            records: outcome.records,
            notes: outcome.notes,
        }
    }

    /// Writes `<stem>.json` and `<stem>.csv` under `dir`.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<()> {
        fs::create_dir_all(dir)?;
        let json = serde_json::to_string_pretty(self)?;
        fs::write(dir.join(format!("{stem}.json")), json + "\n")?;
        write_records_csv(&dir.join(format!("{stem}.csv")), &self.records)
    }
}

/// Shortest round-trip decimal; empty for a missing value.
pub fn fmt_float(v: f64) -> String {
    format!("{v:?}")
}

pub fn write_records_csv(path: &Path, records: &[Record]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["check", "case", "measured", "limit", "passed", "provenance"])?;
    for r in records {
        w.write_record([
            r.check.clone(),
            r.case.clone(),
            fmt_float(r.measured),
            r.limit.map(fmt_float).unwrap_or_default(),
            r.passed.to_string(),
            r.provenance.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Generic CSV writer for data tables.
pub fn write_table_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}
