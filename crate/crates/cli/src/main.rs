use std::process::ExitCode;

use bgls_cli::config::Cli;
use bgls_cli::{execute, report, wants_json, CliError};
use clap::error::ErrorKind;
use clap::Parser;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let json = wants_json(&args);
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            if json {
                return report(&CliError::Config(e.kind().to_string() + ": " + &e.to_string()), true);
            }
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            return report(&CliError::Config("--threads must be at least 1".into()), json);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            return report(&CliError::Internal(format!("thread pool: {e}")), json);
        }
    }
    match execute(&cli.run) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(&e, json),
    }
}
