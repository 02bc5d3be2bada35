//! Machine-readable reports.
//!
//! A report is one JSON document per command run. Tabular data lives in named
//! tables that can also be written as CSV files and read back unchanged.

use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use lclab_core::Status;
use serde::{Deserialize, Serialize};

use crate::scenario::ScenarioEcho;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status,
            detail: detail.into(),
        }
    }

    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check::new(name, Status::Pass, detail)
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check::new(name, Status::Fail, detail)
    }

    pub fn undetermined(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check::new(name, Status::Undetermined, detail)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k].as_str()).collect())
    }

    pub fn to_csv(&self) -> csv::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn from_csv(text: &str) -> csv::Result<Self> {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let columns = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec?.iter().map(str::to_string).collect());
        }
        Ok(Table { columns, rows })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub scenario: ScenarioEcho,
    pub seed: u64,
    pub status: Status,
    pub checks: Vec<Check>,
    /// Notable findings that do not affect the status.
    pub flags: Vec<String>,
    pub tables: BTreeMap<String, Table>,
    pub timing_ms: u64,
}

impl Report {
    pub fn new(command: &str, scenario: ScenarioEcho, seed: u64) -> Self {
        Report {
            command: command.to_string(),
            scenario,
            seed,
            status: Status::Undetermined,
            checks: Vec::new(),
            flags: Vec::new(),
            tables: BTreeMap::new(),
            timing_ms: 0,
        }
    }

    /// The overall status: a pass requires every check to pass, and a report
    /// without checks is undetermined.
    pub fn finish(&mut self) {
        self.status = if self.checks.is_empty() {
            Status::Undetermined
        } else {
            Status::all(self.checks.iter().map(|c| c.status))
        };
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Undetermined => 2,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn write_json(&self, path: &Path) -> io::Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_json() + "\n")
    }

    /// Writes each table to `<dir>/<table>.csv`.
    pub fn write_csv_dir(&self, dir: &Path) -> io::Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, t) in &self.tables {
            let text = t.to_csv().map_err(io::Error::other)?;
            std::fs::write(dir.join(format!("{name}.csv")), text)?;
        }
        Ok(())
    }

    /// Human-readable summary.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "{} [{}]: {:?}\n",
            self.command, self.scenario.name, self.status
        );
        for c in &self.checks {
            out.push_str(&format!(
                "  {:<28} {:<12} {}\n",
                c.name,
                format!("{:?}", c.status),
                c.detail
            ));
        }
        for f in &self.flags {
            out.push_str(&format!("  note: {f}\n"));
        }
        out
    }
}
