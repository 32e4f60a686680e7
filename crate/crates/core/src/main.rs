use std::process::ExitCode;

use clap::Parser;
use plane_traces::cli::{echo_command, run, Cli};

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = Cli::parse_from(&args);
    match run(cli, &echo_command(&args)) {
        Ok(outcome) if outcome.ok() => ExitCode::SUCCESS,
        Ok(outcome) => {
            for f in &outcome.failures {
                eprintln!("check failed: {f}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
