mod args;
mod commands;
mod error;
mod golden;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn run(cli: &Cli) -> Result<commands::Outcome, CliError> {
    match &cli.command {
        Command::Compile(a) => commands::compile(a),
        Command::Eval(a) => commands::eval(a),
        Command::Grad(a) => commands::grad(a),
        Command::Table2(a) => commands::table2(a),
        Command::Shadow(a) => commands::shadow(a),
        Command::SoundnessFuzz(a) => commands::soundness_fuzz(a),
        Command::Optimize(a) => commands::optimize(a),
    }
}

fn report(err: &CliError) -> ExitCode {
    eprintln!("error: {err}");
    eprintln!("{}", commands::diagnostic(err));
    ExitCode::from(err.kind.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or_default();
            let message = first.strip_prefix("error: ").unwrap_or(first).to_string();
            return report(&CliError::usage("usage", message));
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(outcome.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return report(&CliError::internal("cannot write to standard output"));
            }
            match outcome.failure {
                Some(err) => report(&err),
                None => ExitCode::SUCCESS,
            }
        }
        Err(err) => report(&err),
    }
}
