//! Command-line entry points: `solve`, `verify` and `experiment`.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing property,
//! 2 for configuration errors (including unreadable configs and unwritable
//! output paths) and 3 for errors raised during computation.

pub mod config;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::decision::{self, CandidateSet};
use crate::harness::{self, MethodSummary, RegretReport, RowStatus, Selector};
use crate::verify;

pub use config::{ConfigError, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "imprecise-lp", version, about = "Decisions for linear programs under imprecise uncertainty")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the maximin and maximal sets for one uncertain LP.
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// JSON file receiving the decision outcome.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the seeded property suite against the brute-force oracle.
    Verify {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Shift every tolerance below zero so that the suite must fail.
        #[arg(long, hide = true)]
        corrupt_tolerance: bool,
    },
    /// Run a predict-then-optimize regret experiment.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Directory receiving `summary.json` and `regret.csv`.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("computation error: {0}")]
    Computation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Computation(_) => 3,
        }
    }
}

fn computation(e: impl std::fmt::Display) -> CliError {
    CliError::Computation(e.to_string())
}

fn config_err(path: &Path, message: impl std::fmt::Display) -> CliError {
    CliError::Config(ConfigError { path: path.display().to_string(), message: message.to_string() })
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| config_err(path, e))?;
    RunConfig::parse(&text).map_err(|mut e| {
        e.path = format!("{}: {}", path.display(), e.path);
        CliError::Config(e)
    })
}

fn expect_mode(cfg: &RunConfig, want: &str) -> Result<(), CliError> {
    if cfg.mode() != want {
        return Err(CliError::Config(ConfigError {
            path: "mode".into(),
            message: format!("expected \"{want}\", found \"{}\"", cfg.mode()),
        }));
    }
    Ok(())
}

/// Write `contents` next to `path` and rename it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| config_err(path, e))?;
    tmp.write_all(contents).map_err(|e| config_err(path, e))?;
    tmp.persist(path).map_err(|e| config_err(path, e.error))?;
    Ok(())
}

/// Parse arguments, run, print errors to stderr and map them to exit codes.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Run a parsed command. `Ok(false)` means `verify` found a failing property.
pub fn run(cli: Cli, out: &mut impl Write) -> Result<bool, CliError> {
    match cli.command {
        Command::Solve { config, out: path } => {
            let cfg = load_config(&config)?;
            expect_mode(&cfg, "solve")?;
            let RunConfig::Solve(cfg) = cfg else { unreachable!() };
            let text = solve(&cfg)?;
            write_atomic(&path, text.as_bytes())?;
            let _ = writeln!(out, "wrote {}", path.display());
            Ok(true)
        }
        Command::Verify { seed, config, corrupt_tolerance } => {
            let raw = match &config {
                Some(p) => {
                    let cfg = load_config(p)?;
                    expect_mode(&cfg, "verify")?;
                    let RunConfig::Verify(v) = cfg else { unreachable!() };
                    v
                }
                None => Default::default(),
            };
            let mut cfg = raw.resolve(seed)?;
            if corrupt_tolerance {
                cfg.tolerance_offset = -1.0;
            }
            let results = verify::run_all(&cfg).map_err(computation)?;
            let mut all = true;
            for r in &results {
                all &= r.passed;
                let _ = writeln!(
                    out,
                    "{} {} instances={} violations={} max_deviation={:e}{}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.name,
                    r.instances,
                    r.violations,
                    r.max_deviation,
                    r.detail.as_deref().map(|d| format!(" first: {d}")).unwrap_or_default()
                );
            }
            Ok(all)
        }
        Command::Experiment { config, out: dir } => {
            let cfg = load_config(&config)?;
            expect_mode(&cfg, "experiment")?;
            let RunConfig::Experiment(cfg) = cfg else { unreachable!() };
            let (spec, methods, settings) = cfg.resolve()?;
            let report = harness::run_experiment(&spec, &methods, &settings).map_err(computation)?;
            std::fs::create_dir_all(&dir).map_err(|e| config_err(&dir, e))?;
            write_atomic(&dir.join("summary.json"), summary_json(&report)?.as_bytes())?;
            write_atomic(&dir.join("regret.csv"), regret_csv(&report, spec.n).as_bytes())?;
            for m in &report.methods {
                let _ = writeln!(
                    out,
                    "{}: evaluated={} mean_regret={} worst_case_regret={} vacuous_rate={}",
                    m.method,
                    m.evaluated,
                    opt(m.mean_regret),
                    opt(m.worst_case_regret),
                    opt(m.vacuous_rate)
                );
            }
            Ok(true)
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |v| v.to_string())
}

/// Solve one configured problem and return the outcome as pretty JSON.
pub fn solve(cfg: &config::SolveConfig) -> Result<String, CliError> {
    let problem = cfg.problem.resolve()?;
    let (cand_opts, options) = cfg.decision.resolve("decision")?;
    let candidates = CandidateSet::build(&problem, &cand_opts).map_err(computation)?;
    let outcome = decision::decide(&problem, &candidates, &options).map_err(computation)?;
    let mut text = serde_json::to_string_pretty(&outcome).map_err(computation)?;
    text.push('\n');
    Ok(text)
}

#[derive(Serialize)]
struct Summary<'a> {
    seed: u64,
    instances: usize,
    selector: Selector,
    methods: &'a [MethodSummary],
    errors: Vec<ErrorRow<'a>>,
}

#[derive(Serialize)]
struct ErrorRow<'a> {
    instance: usize,
    method: &'a str,
    error: &'a str,
}

pub fn summary_json(report: &RegretReport) -> Result<String, CliError> {
    let summary = Summary {
        seed: report.seed,
        instances: report.instances,
        selector: report.selector,
        methods: &report.methods,
        errors: report
            .rows
            .iter()
            .filter_map(|r| {
                r.error.as_deref().map(|error| ErrorRow { instance: r.instance, method: &r.method, error })
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&summary).map_err(computation)?;
    text.push('\n');
    Ok(text)
}

/// One line per `(instance, method)` with columns
/// `instance,method,status,regret,vacuous,x0,…,x{n-1}`; missing values are empty.
pub fn regret_csv(report: &RegretReport, n: usize) -> String {
    let mut s = String::from("instance,method,status,regret,vacuous");
    for j in 0..n {
        let _ = write!(s, ",x{j}");
    }
    s.push('\n');
    for r in &report.rows {
        let status = match r.status {
            RowStatus::Ok => "ok",
            RowStatus::SkippedInfeasible => "skipped_infeasible",
            RowStatus::Error => "error",
        };
        let _ = write!(s, "{},{},{},", r.instance, r.method, status);
        if let Some(v) = r.regret {
            let _ = write!(s, "{v}");
        }
        s.push(',');
        if let Some(v) = r.vacuous {
            let _ = write!(s, "{v}");
        }
        for j in 0..n {
            s.push(',');
            if let Some(x) = &r.decision {
                let _ = write!(s, "{}", x[j]);
            }
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests;
