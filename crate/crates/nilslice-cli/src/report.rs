use std::collections::BTreeMap;
use std::fmt::Write;

use nilslice::liealg::Family;
use serde::{Deserialize, Serialize};

use crate::{CampaignConfig, Command};

/// Bumped whenever a field is added, removed or renamed.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub kind: Family,
    pub m: usize,
    pub n: usize,
    pub pass: bool,
    /// Samples drawn for this cell (0 for exact one-shot checks).
    pub samples: usize,
    /// Samples excluded from a check, e.g. repeated support points.
    pub skipped: usize,
    /// Residual maxima, counts and ratios, by name.
    pub metrics: BTreeMap<String, f64>,
    pub info: BTreeMap<String, String>,
    pub elapsed_ms: f64,
}

impl CellResult {
    pub fn new(kind: Family, m: usize, n: usize) -> Self {
        CellResult {
            kind,
            m,
            n,
            pass: true,
            samples: 0,
            skipped: 0,
            metrics: BTreeMap::new(),
            info: BTreeMap::new(),
            elapsed_ms: 0.0,
        }
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.get(name).copied()
    }

    pub(crate) fn set(&mut self, name: &str, v: f64) {
        self.metrics.insert(name.to_string(), v);
    }

    /// Keeps the running maximum of a metric.
    pub(crate) fn max(&mut self, name: &str, v: f64) {
        let e = self.metrics.entry(name.to_string()).or_insert(0.0);
        if v > *e {
            *e = v;
        }
    }

    pub(crate) fn note(&mut self, name: &str, v: impl Into<String>) {
        self.info.insert(name.to_string(), v.into());
    }

    pub(crate) fn fail(&mut self, reason: impl Into<String>) {
        self.pass = false;
        self.info.entry("failure".into()).or_insert_with(|| reason.into());
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub command: Command,
    pub pass: bool,
    pub cells: Vec<CellResult>,
    pub elapsed_ms: f64,
}

impl CampaignReport {
    pub fn failed_cells(&self) -> impl Iterator<Item = &CellResult> {
        self.cells.iter().filter(|c| !c.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: Command,
    pub config: CampaignConfig,
    pub pass: bool,
    pub campaigns: Vec<CampaignReport>,
    pub elapsed_ms: f64,
}

impl Report {
    pub fn new(command: Command, config: CampaignConfig, campaigns: Vec<CampaignReport>, elapsed_ms: f64) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command,
            config,
            pass: campaigns.iter().all(|c| c.pass),
            campaigns,
            elapsed_ms,
        }
    }

    pub fn campaign(&self, command: Command) -> Option<&CampaignReport> {
        self.campaigns.iter().find(|c| c.command == command)
    }

    /// The same report with every timing field zeroed.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        r.elapsed_ms = 0.0;
        for c in &mut r.campaigns {
            c.elapsed_ms = 0.0;
            for cell in &mut c.cells {
                cell.elapsed_ms = 0.0;
            }
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.campaigns {
            let failed = c.failed_cells().count();
            let _ = writeln!(
                s,
                "{} {} ({} cells, {} failed, {:.0} ms)",
                c.command,
                verdict(c.pass),
                c.cells.len(),
                failed,
                c.elapsed_ms
            );
            for cell in &c.cells {
                let _ = write!(s, "  {}(m={}, n={}) {}", cell.kind, cell.m, cell.n, verdict(cell.pass));
                if cell.samples > 0 {
                    let _ = write!(s, " samples={}", cell.samples);
                }
                if cell.skipped > 0 {
                    let _ = write!(s, " skipped={}", cell.skipped);
                }
                for (k, v) in &cell.metrics {
                    let _ = write!(s, " {k}={v:.3e}");
                }
                for (k, v) in &cell.info {
                    let _ = write!(s, " {k}={v}");
                }
                s.push('\n');
            }
        }
        let _ = writeln!(s, "{} {}", self.command, verdict(self.pass));
        s
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}
