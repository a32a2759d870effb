use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use seqspace_cli::args::Cli;
use seqspace_cli::commands::Status;
use seqspace_cli::{execute, report};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(Status::BadConfig as u8),
            };
        }
    };
    let out = match &cli.command {
        seqspace_cli::args::Command::Construct(a)
        | seqspace_cli::args::Command::Certify(a)
        | seqspace_cli::args::Command::Axioms(a)
        | seqspace_cli::args::Command::Catalog(a)
        | seqspace_cli::args::Command::Attain(a) => a.out.clone(),
    };
    match execute(cli.command).and_then(|(status, bytes)| {
        if let Some(bytes) = bytes {
            report::emit(&bytes, out.as_deref())?;
        }
        Ok(status)
    }) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(Status::Fail as u8)
        }
    }
}
