mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Command, Format};
use commands::PacketArgs;
use report::{ErrorReport, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (name, format, outcome) = match &cli.command {
        Command::Eval {
            kind,
            method,
            common,
        } => (
            "eval",
            common.format,
            commands::eval(*kind, *method, common),
        ),
        Command::Verify {
            suite,
            samples,
            tol,
            common,
        } => (
            "verify",
            common.format,
            commands::verify(*suite, *samples, tol, common),
        ),
        Command::Scatter {
            center,
            width,
            xi0,
            cutoff,
            window,
            common,
        } => {
            let packet = PacketArgs {
                center: *center,
                width: *width,
                xi0: *xi0,
                cutoff: *cutoff,
                window: *window,
            };
            ("scatter", common.format, commands::scatter(&packet, common))
        }
    };
    let mut stdout = std::io::stdout().lock();
    match outcome {
        Ok(mut out) => {
            out.report.runtime_ms = start.elapsed().as_millis();
            let written = match (format, &out.csv) {
                (Format::Csv, Some(csv)) => stdout.write_all(csv),
                _ => serde_json::to_writer_pretty(&mut stdout, &out.report)
                    .map_err(std::io::Error::from)
                    .and_then(|_| writeln!(stdout)),
            };
            if written.is_err() {
                return ExitCode::from(EXIT_USAGE);
            }
            ExitCode::from(if out.report.pass() {
                EXIT_PASS
            } else {
                EXIT_FAIL
            })
        }
        Err(failure) => {
            let report = ErrorReport {
                command: name,
                error: &failure,
            };
            let _ = serde_json::to_writer_pretty(&mut stdout, &report);
            let _ = writeln!(stdout);
            eprintln!("error: {}", failure.message);
            ExitCode::from(EXIT_USAGE)
        }
    }
}
