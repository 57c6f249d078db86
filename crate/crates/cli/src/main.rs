mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use config::Cli;

/// A failure that ends the run, with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl From<momentkit::Error> for Failure {
    fn from(e: momentkit::Error) -> Self {
        Failure { code: if e.is_numerical() { 3 } else { 2 }, kind: e.kind().to_string(), message: e.to_string() }
    }
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Failure { code: 2, kind: "config".into(), message: message.into() }
    }

    fn io(e: std::io::Error) -> Self {
        Failure { code: 2, kind: "io".into(), message: e.to_string() }
    }
}

fn report_failure(f: &Failure) -> ExitCode {
    let line = json!({"error": f.kind, "message": f.message, "exit_code": f.code});
    eprintln!("{line}");
    ExitCode::from(f.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string().lines().next().unwrap_or_default().to_string();
            return report_failure(&Failure::config(message));
        }
    };
    let out_path = cli.out.clone();
    match commands::run(&cli) {
        Ok(output) => {
            let written = match &out_path {
                Some(p) => std::fs::write(p, &output.text),
                None => std::io::stdout().write_all(output.text.as_bytes()),
            };
            if let Err(e) = written {
                return report_failure(&Failure::io(e));
            }
            ExitCode::from(output.status)
        }
        Err(f) => report_failure(&f),
    }
}
