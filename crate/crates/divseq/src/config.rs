//! Command-line surface and the validated run configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use divseq_core::arith::FactorBudget;
use thiserror::Error;

use crate::cmd::{ec, eds, ff, int, report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("golden file {} does not exist", .0.display())]
    MissingGolden(PathBuf),
    /// A check that aborts the run, such as a claimed factorization that
    /// does not match the computed term.
    #[error("check failed: {0}")]
    Check(String),
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            _ => 2,
        }
    }
}

pub fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "divseq", version, about = "Experiments on divisibility sequences over Z, F_q[t] and elliptic curves")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Trial-division bound of the factoring budget.
    #[arg(long, global = true, default_value_t = FactorBudget::DEFAULT_TRIAL_BOUND)]
    pub budget_trial: u64,
    /// Pollard-Brent iteration cap per composite.
    #[arg(long, global = true, default_value_t = FactorBudget::DEFAULT_RHO_CAP)]
    pub budget_rho: u64,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Shorthand for `--format table`.
    #[arg(long, global = true)]
    pub table: bool,
    /// Write the artifact here (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Compare the table rendering against this file.
    #[arg(long, global = true)]
    pub golden: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Factorizations and bounds for a^n - b^n.
    Int(int::IntArgs),
    /// Order statistics and factorizations over F_q[t].
    Ff(ff::FfArgs),
    /// Elliptic denominator sequence of a point on y^2 = x^3 + Ax + B.
    Ec(ec::EcArgs),
    /// Division-polynomial values psi_n(Q) and the Ward recurrence.
    Eds(eds::EdsArgs),
    /// Self-check suites covering every engine.
    Report(report::ReportArgs),
}

#[derive(Debug)]
pub enum Experiment {
    Int(int::IntConfig),
    Ff(ff::FfConfig),
    Ec(ec::EcConfig),
    Eds(eds::EdsConfig),
    Report(report::ReportConfig),
}

#[derive(Debug)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub budget: FactorBudget,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub golden: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<RunConfig, CliError> {
        let g = cli.global;
        let budget = FactorBudget::new(g.budget_trial, g.budget_rho, g.seed)
            .ok_or_else(|| CliError::Config("--budget-trial must be at least 2".into()))?;
        let format = if g.table { Format::Table } else { g.format };
        let experiment = match cli.command {
            Command::Int(a) => Experiment::Int(int::IntConfig::validate(a)?),
            Command::Ff(a) => Experiment::Ff(ff::FfConfig::validate(a)?),
            Command::Ec(a) => Experiment::Ec(ec::EcConfig::validate(a)?),
            Command::Eds(a) => Experiment::Eds(eds::EdsConfig::validate(a)?),
            Command::Report(a) => Experiment::Report(report::ReportConfig::validate(a)?),
        };
        Ok(RunConfig { experiment, budget, format, out: g.out, golden: g.golden })
    }
}

/// `"x,y"` as two values of `T`.
pub fn parse_pair<T: std::str::FromStr>(flag: &str, text: &str) -> Result<(T, T), CliError> {
    let bad = || CliError::Config(format!("{flag} expects two comma-separated values, got `{text}`"));
    let (x, y) = text.split_once(',').ok_or_else(bad)?;
    Ok((x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?))
}

/// Requested checks, with `all` expanded to `known`.
pub fn parse_checks(requested: &[String], known: &[&'static str]) -> Result<Vec<&'static str>, CliError> {
    let mut out: Vec<&'static str> = Vec::new();
    for name in requested.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        if name == "all" {
            return Ok(known.to_vec());
        }
        let k = known.iter().find(|k| **k == name).ok_or_else(|| {
            CliError::Config(format!("unknown check `{name}`; expected one of {} or all", known.join(", ")))
        })?;
        if !out.contains(k) {
            out.push(k);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_and_checks() {
        assert_eq!(parse_pair::<i64>("--curve", "0, -11").unwrap(), (0, -11));
        assert!(parse_pair::<i64>("--curve", "0").is_err());
        let known = ["a", "b", "c"];
        assert_eq!(parse_checks(&["b".into(), "a".into(), "b".into()], &known).unwrap(), vec!["b", "a"]);
        assert_eq!(parse_checks(&["all".into()], &known).unwrap(), known.to_vec());
        assert!(parse_checks(&["d".into()], &known).is_err());
    }
}
