use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use colorbound_cli::args::{Cli, Command, OutputArgs};
use colorbound_cli::commands::{self, Outcome, Report};
use colorbound_cli::output::emit;
use colorbound_cli::{CliError, CliResult};

fn finish<R: Report>(outcome: CliResult<Outcome<R>>, out: &OutputArgs) -> CliResult<()> {
    let outcome = outcome?;
    emit(&outcome.report, out)?;
    match outcome.violation {
        Some(v) => Err(CliError::InvariantViolation(v)),
        None => Ok(()),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Color(a) => finish(commands::color(&a), &a.out),
        Command::Bound(a) => finish(commands::bound(&a), &a.out),
        Command::Estimate(a) => finish(commands::estimate(&a), &a.out),
        Command::Stability(a) => finish(commands::stability(&a), &a.out),
        Command::Hierarchy(a) => finish(commands::hierarchy(&a), &a.out),
        Command::GenBound(a) => finish(commands::gen_bound(&a), &a.out),
        Command::Synth(a) => {
            let text = commands::synth(&a)?;
            if a.output.is_none() {
                std::io::stdout()
                    .write_all(text.as_bytes())
                    .map_err(|e| CliError::Other(format!("stdout: {e}")))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
