//! Batch verification campaigns over the slice cells and their reports.

mod campaigns;
mod report;

use std::fmt;
use std::str::FromStr;

use nilslice::liealg::Family;
use nilslice::slices::OrbitIndex;
use serde::{Deserialize, Serialize};

pub use campaigns::run_campaign;
pub use report::{CellResult, CampaignReport, Report, SCHEMA_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("m must be at least 1")]
    EmptyRange,
    #[error("--n {n} is not valid for any selected kind and m")]
    NoValidCell { n: usize },
    #[error("unknown command {0}")]
    UnknownCommand(String),
    #[error("tolerance must be positive")]
    Tolerance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyCharpoly,
    VerifyJm,
    VerifyLambda,
    VerifyTransversality,
    VerifyKleinian,
    VerifyEmbedding,
    VerifySmoothness,
    ReportAll,
}

impl Command {
    pub const CAMPAIGNS: [Command; 7] = [
        Command::VerifyCharpoly,
        Command::VerifyJm,
        Command::VerifyLambda,
        Command::VerifyTransversality,
        Command::VerifyKleinian,
        Command::VerifyEmbedding,
        Command::VerifySmoothness,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyCharpoly => "verify-charpoly",
            Command::VerifyJm => "verify-jm",
            Command::VerifyLambda => "verify-lambda",
            Command::VerifyTransversality => "verify-transversality",
            Command::VerifyKleinian => "verify-kleinian",
            Command::VerifyEmbedding => "verify-embedding",
            Command::VerifySmoothness => "verify-smoothness",
            Command::ReportAll => "report-all",
        }
    }

    /// Samples per cell when --samples is not given.
    pub fn default_samples(&self) -> usize {
        match self {
            Command::VerifyCharpoly => 25,
            Command::VerifyLambda => 50,
            Command::VerifyEmbedding => 100,
            Command::VerifySmoothness => 10,
            _ => 0,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Command::CAMPAIGNS
            .iter()
            .chain([Command::ReportAll].iter())
            .find(|c| c.name() == s)
            .copied()
            .ok_or_else(|| ConfigError::UnknownCommand(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative residual of support points on the surface, and of the
    /// λ-equivariance of squared eigenvalues.
    pub residual: f64,
    /// Relative round-trip error of the ideal point.
    pub round_trip: f64,
    /// Support points closer than this count as repeated.
    pub separation: f64,
    /// Relative singular-value threshold for the Jacobian rank.
    pub rank: f64,
    /// Relative analytic vs finite-difference Jacobian mismatch.
    pub finite_difference: f64,
    /// Discrepancy below which two support multisets are the same.
    pub support_match: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-9,
            round_trip: 1e-8,
            separation: 1e-6,
            rank: 1e-8,
            finite_difference: 1e-6,
            support_match: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "policy", content = "n")]
pub enum NPolicy {
    AllValid,
    Explicit(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub kinds: Vec<Family>,
    pub m_min: usize,
    pub m_max: usize,
    pub n: NPolicy,
    /// Overrides each command's default sample count.
    pub samples: Option<usize>,
    pub seed: u64,
    pub tol: Tolerances,
    pub format: Format,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            kinds: Family::ALL.to_vec(),
            m_min: 1,
            m_max: 6,
            n: NPolicy::AllValid,
            samples: None,
            seed: 1,
            tol: Tolerances::default(),
            format: Format::Json,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.m_min == 0 || self.m_max < self.m_min {
            return Err(ConfigError::EmptyRange);
        }
        let t = &self.tol;
        if [t.residual, t.round_trip, t.separation, t.rank, t.finite_difference, t.support_match]
            .iter()
            .any(|&x| x.is_nan() || x <= 0.0)
        {
            return Err(ConfigError::Tolerance);
        }
        if let NPolicy::Explicit(n) = self.n {
            if self.cells(&self.kinds).is_empty() {
                return Err(ConfigError::NoValidCell { n });
            }
        }
        Ok(())
    }

    pub fn samples_for(&self, command: Command) -> usize {
        self.samples.unwrap_or_else(|| command.default_samples())
    }

    /// Valid cells for the given kinds, in (kind, m, n) order.
    pub fn cells(&self, kinds: &[Family]) -> Vec<OrbitIndex> {
        let mut out = Vec::new();
        for &f in Family::ALL.iter().filter(|f| kinds.contains(f) && self.kinds.contains(f)) {
            for m in self.m_min..=self.m_max {
                for idx in OrbitIndex::all(f, m) {
                    if matches!(self.n, NPolicy::Explicit(n) if n != idx.n) {
                        continue;
                    }
                    out.push(idx);
                }
            }
        }
        out
    }
}

/// Runs one command; for `report-all` every campaign in turn.
pub fn run(command: Command, config: &CampaignConfig) -> Result<Report, ConfigError> {
    config.validate()?;
    let commands: Vec<Command> = match command {
        Command::ReportAll => Command::CAMPAIGNS.to_vec(),
        c => vec![c],
    };
    let start = std::time::Instant::now();
    let campaigns = commands.into_iter().map(|c| run_campaign(c, config)).collect();
    Ok(Report::new(command, config.clone(), campaigns, start.elapsed().as_secs_f64() * 1e3))
}

/// Thread count from NILSLICE_THREADS, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var("NILSLICE_THREADS").ok()?.parse().ok().filter(|&n| n > 0)
}
