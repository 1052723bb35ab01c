//! Command-line front end: argument parsing, command dispatch and output
//! rendering for the `bgls` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod plot;

use std::io::Write;
use std::process::ExitCode;

use serde_json::json;

use commands::{num, Output};
use config::{Format, RunConfig};
pub use error::{CliError, CliResult};

/// True when the raw arguments ask for JSON, even if they fail to parse.
pub fn wants_json(args: &[String]) -> bool {
    args.windows(2).any(|w| w[0] == "--format" && w[1] == "json") || args.iter().any(|a| a == "--format=json")
}

pub fn render_csv(out: &Output) -> CliResult<String> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    w.write_record(&out.header)?;
    for row in &out.rows {
        w.write_record(row.iter().map(|&x| num(x)))?;
    }
    for (k, v) in &out.footer {
        w.write_record([k, v.as_str()])?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

pub fn render_json(config: &RunConfig, out: &Output) -> CliResult<String> {
    let doc = json!({
        "command": config.command.name(),
        "config": config.command,
        "result": out.result,
    });
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Runs a parsed configuration and writes its outputs.
pub fn execute(config: &RunConfig) -> CliResult<()> {
    let common = config.command.common();
    let out = commands::run(&config.command)?;
    let text = match common.format {
        Format::Csv => render_csv(&out)?,
        Format::Json => render_json(config, &out)?,
    };
    match &common.output {
        Some(path) => std::fs::write(path, &text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    if let Some(path) = &common.plot {
        std::fs::write(path, plot::render(&out.plot))?;
    }
    match out.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Prints `err` in the requested style and returns its exit code.
pub fn report(err: &CliError, json: bool) -> ExitCode {
    if json {
        eprintln!("{}", err.to_json());
    } else {
        eprintln!("error: {}", err.message());
    }
    ExitCode::from(err.exit_code() as u8)
}

