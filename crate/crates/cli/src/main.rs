use std::process::ExitCode;

use clap::Parser;
use w1simplex_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(&cli))
}
