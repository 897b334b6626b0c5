use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = ihm_cli::Cli::parse();
    ExitCode::from(ihm_cli::run(cli))
}
