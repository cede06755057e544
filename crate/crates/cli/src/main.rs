mod args;
mod commands;
mod table;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::{json, Value};

use args::{Cli, Command, Format};

pub const SCHEMA_VERSION: u32 = 1;

/// Result of one command: the JSON payload, its table rendering and whether
/// the mathematical checks succeeded.
pub struct Outcome {
    pub config: Value,
    pub result: Value,
    pub table: String,
    pub ok: bool,
}

/// Bad flags, unreadable files, invalid algebra definitions: exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n > 0 {
            // Only fails if a pool already exists, which cannot happen here.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let name = cli.command.name();
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Catalog(a) => commands::catalog(a),
        Command::Jacobi(a) => commands::jacobi(a),
        Command::Derive(a) => commands::derive(a),
        Command::Tp(a) => commands::tp(a),
        Command::Compile(a) => commands::compile(a),
    };
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let outcome = match outcome {
        Ok(o) => o,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let text = match cli.format {
        Format::Json => {
            let doc = json!({
                "schema": format!("lietp.{name}.v{SCHEMA_VERSION}"),
                "tool": "lietp",
                "version": env!("CARGO_PKG_VERSION"),
                "command": name,
                "config": outcome.config,
                "elapsed_ms": elapsed_ms,
                "ok": outcome.ok,
                "result": outcome.result,
            });
            serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
        }
        Format::Table => outcome.table,
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
