mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Outcome;

/// Caps sweep parallelism when set to a positive integer.
const THREADS_VAR: &str = "RABI_QPT_THREADS";

fn configure_threads() -> Result<(), String> {
    let Ok(text) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let threads: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("{THREADS_VAR} must be a positive integer, found `{text}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::CriticalPoint(a) => commands::critical_point_cmd(a),
        Command::Sweep(a) => commands::sweep_cmd(a),
        Command::Wigner(a) => commands::wigner_cmd(a),
        Command::Validate(a) => commands::validate_cmd(a),
    });
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Failed(summary)) => {
            eprintln!("{summary}");
            ExitCode::FAILURE
        }
        Err(message) => {
            eprintln!("{}", serde_json::json!({ "error": message }));
            ExitCode::FAILURE
        }
    }
}
