use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    saga_cli::run(saga_cli::Cli::parse())
}
