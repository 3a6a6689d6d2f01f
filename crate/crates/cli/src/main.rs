//! `sepoly`: batch driver for the verification engine. Every subcommand emits
//! a JSON report (stdout, or `--out FILE`) and a one-line summary on stderr.
//! Exit codes: 0 pass, 1 verification finding, 2 usage error.

mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde::Serialize;

use args::{Cli, Command};
use commands::Outcome;

#[derive(Serialize)]
struct RunReport {
    command: String,
    params: serde_json::Value,
    results: serde_json::Value,
    findings: Vec<String>,
    exit_status: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<u128>,
}

fn dispatch(cmd: &Command, jobs: usize) -> sepoly::Result<Outcome> {
    match cmd {
        Command::Gen(a) => commands::gen(a),
        Command::VerifyOde(a) => commands::verify_ode(a, jobs),
        Command::Scan(a) => commands::scan(a, jobs),
        Command::Indicial(a) => commands::indicial(a),
        Command::Kernel(a) => commands::kernel(a),
        Command::Classify(a) => commands::classify(a, jobs),
        Command::Superpose(a) => commands::superpose(a),
        Command::Gegenbauer(a) => commands::gegenbauer(a),
        Command::Favard(a) => commands::favard(a),
        Command::Gram(a) => commands::gram(a),
        Command::Identify(a) => commands::identify(a),
        Command::Series(a) => commands::series(a),
        Command::Pde(a) => commands::pde(a, jobs),
        Command::FitOde(a) => commands::fit_ode(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = match dispatch(&cli.command, cli.jobs) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let elapsed = start.elapsed();
    let status: u8 = if outcome.findings.is_empty() { 0 } else { 1 };

    let report = RunReport {
        command: cli.command.name().to_string(),
        params: serde_json::to_value(&cli.command).expect("params serialize"),
        results: outcome.results,
        findings: outcome.findings.clone(),
        exit_status: status,
        wall_time_ms: cli.timing.then_some(elapsed.as_millis()),
    };
    // Round-trip through Value so every object has sorted keys.
    let value = serde_json::to_value(&report).expect("report serializes");
    let json = serde_json::to_string_pretty(&value).expect("report serializes") + "\n";

    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &json) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    let mut stdout = std::io::stdout().lock();
    let written = match (&outcome.text, &cli.out) {
        (Some(text), _) => stdout.write_all(text.as_bytes()),
        (None, None) => stdout.write_all(json.as_bytes()),
        (None, Some(_)) => Ok(()),
    };
    if written.is_err() {
        return ExitCode::from(2);
    }

    let verdict = if status == 0 { "PASS" } else { "FINDING" };
    eprintln!("{}: {verdict} — {}", cli.command.name(), outcome.summary);
    for f in &outcome.findings {
        eprintln!("  - {f}");
    }
    if cli.timing {
        eprintln!("  wall time: {:.3} s", elapsed.as_secs_f64());
    }
    ExitCode::from(status)
}
