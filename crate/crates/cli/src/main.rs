use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    ExitCode::from(magres_cli::run(&magres_cli::Cli::parse()))
}
