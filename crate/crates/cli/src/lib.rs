//! Command-line front end for `seqspace`.
//!
//! Every command writes a report `{config, results, pass}` as JSON or CSV and
//! exits with 0 when all checks pass, 1 on a failed check, 2 when the
//! catalog has no witness, and 3 on a bad configuration.

pub mod args;
pub mod commands;
pub mod report;

use anyhow::Result;

use args::{Command, Format};
use commands::Status;
use report::{Report, RunConfig};

/// Runs one parsed command and returns the exit status and rendered report.
pub fn execute(command: Command) -> Result<(Status, Option<Vec<u8>>)> {
    let (kind, args) = command.split();
    let format: Format = args.format;
    let outcome = match commands::run(kind, &args) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok((Status::BadConfig, None));
        }
    };
    let (status, results) = outcome?;
    let report = Report {
        pass: status == Status::Pass,
        config: RunConfig {
            command: kind,
            args,
        },
        results,
    };
    Ok((status, Some(report.render(format)?)))
}
