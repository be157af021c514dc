//! `divseq`: experiment runner for divisibility sequences.
//!
//! Exit status is 0 when every assertable check passes, 1 on a check
//! failure or golden mismatch, 2 on a configuration or I/O error.

mod cmd;
mod config;
mod golden;
mod output;
mod record;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, CliError, Experiment, Format, RunConfig};
use record::{ReportRecord, Status};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("divseq: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn execute(config: &RunConfig) -> Result<ReportRecord, CliError> {
    let budget = &config.budget;
    match &config.experiment {
        Experiment::Int(c) => cmd::int::run(c, budget),
        Experiment::Ff(c) => cmd::ff::run(c, budget),
        Experiment::Ec(c) => cmd::ec::run(c, budget),
        Experiment::Eds(c) => cmd::eds::run(c),
        Experiment::Report(c) => cmd::report::run(c, budget),
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let config = RunConfig::from_cli(cli)?;
    let mut record = execute(&config)?;
    if let Some(path) = &config.golden {
        match golden::golden_compare(&record.render_table(), path)? {
            None => record.check("golden", None, Status::Pass, path.display().to_string()),
            Some(d) => record.check("golden", None, Status::Fail, d.to_string()),
        }
    }
    let artifact = match config.format {
        Format::Table => record.render_table(),
        Format::Csv => record.render_csv(),
        Format::Json => record.render_json(),
    };
    output::write_artifact(config.out.as_deref(), &artifact)?;
    eprint!("{}", record.summary());
    Ok(if record.failed() { ExitCode::from(1) } else { ExitCode::SUCCESS })
}
