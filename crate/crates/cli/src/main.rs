mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { error::USAGE } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Compile(a) => commands::compile(a),
        Command::Analyze(a) => commands::analyze(a),
        Command::Lemmatize(a) => commands::lemmatize(a),
        Command::Tags(a) => commands::tags(a),
        Command::Stats(a) => commands::stats(a),
        Command::Bench(a) => commands::bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::BrokenPipe) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("morphkit: {e}");
            ExitCode::from(e.code())
        }
    }
}
