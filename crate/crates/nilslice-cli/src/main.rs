use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use nilslice::liealg::Family;
use nilslice_cli::{run, CampaignConfig, Command, Format, NPolicy, Tolerances};

#[derive(Clone, Copy, ValueEnum)]
enum Cmd {
    VerifyCharpoly,
    VerifyTransversality,
    VerifyJm,
    VerifyLambda,
    VerifyEmbedding,
    VerifyKleinian,
    VerifySmoothness,
    ReportAll,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Command {
        match c {
            Cmd::VerifyCharpoly => Command::VerifyCharpoly,
            Cmd::VerifyTransversality => Command::VerifyTransversality,
            Cmd::VerifyJm => Command::VerifyJm,
            Cmd::VerifyLambda => Command::VerifyLambda,
            Cmd::VerifyEmbedding => Command::VerifyEmbedding,
            Cmd::VerifyKleinian => Command::VerifyKleinian,
            Cmd::VerifySmoothness => Command::VerifySmoothness,
            Cmd::ReportAll => Command::ReportAll,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Json,
    Text,
}

/// Verify slice identities, certificates and embeddings over seeded samples.
#[derive(Parser)]
#[command(name = "nilslice", version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// Restrict to one family (C, D or B).
    #[arg(long)]
    kind: Option<Family>,
    /// A single rank m.
    #[arg(long, conflicts_with = "m_max")]
    m: Option<usize>,
    /// A single n instead of every valid one.
    #[arg(long)]
    n: Option<usize>,
    /// Ranks 1..=m-max.
    #[arg(long)]
    m_max: Option<usize>,
    /// Samples per cell; each command has its own default.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Scales every tolerance by tol / 1e-9.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Fmt::Json)]
    format: Fmt,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn config(a: &Args) -> CampaignConfig {
    let mut c = CampaignConfig::default();
    if let Some(k) = a.kind {
        c.kinds = vec![k];
    }
    if let Some(m) = a.m {
        c.m_min = m;
        c.m_max = m;
    }
    if let Some(m) = a.m_max {
        c.m_max = m;
    }
    if let Some(n) = a.n {
        c.n = NPolicy::Explicit(n);
    }
    c.samples = a.samples;
    c.seed = a.seed;
    if let Some(t) = a.tol {
        let d = Tolerances::default();
        let f = t / d.residual;
        c.tol = Tolerances {
            residual: d.residual * f,
            round_trip: d.round_trip * f,
            separation: d.separation * f,
            rank: d.rank * f,
            finite_difference: d.finite_difference * f,
            support_match: d.support_match * f,
        };
    }
    c.format = match a.format {
        Fmt::Json => Format::Json,
        Fmt::Text => Format::Text,
    };
    c
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = config(&args);
    let report = match run(args.command.into(), &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("nilslice: {e}");
            return ExitCode::from(2);
        }
    };
    let body = match cfg.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    match &args.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, body) {
                eprintln!("nilslice: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{body}"),
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
