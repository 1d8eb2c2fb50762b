use std::process::ExitCode;

use clap::Parser;
use gabiter_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // keep exit code 2 for "not a frame"
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gabiter: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
