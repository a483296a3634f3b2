use std::process::ExitCode;

use chromloc_cli::{run, ExitStatus, RunConfig};
use clap::Parser;

fn main() -> ExitCode {
    let config = RunConfig::parse();
    let mut stdout = std::io::stdout().lock();
    match run(&config, &mut stdout) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ExitStatus::InputError.code())
        }
    }
}
