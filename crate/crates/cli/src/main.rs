use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    ExitCode::from(qdeconv_cli::run(qdeconv_cli::Cli::parse()))
}
