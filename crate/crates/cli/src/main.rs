use std::process::ExitCode;

use banana_cli::{run, Cli, Status, UsageError};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            let status = if e.is::<UsageError>() {
                Status::Usage
            } else {
                Status::Failed
            };
            ExitCode::from(status as u8)
        }
    }
}
