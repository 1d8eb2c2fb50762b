//! Command-line harness around `gabiter-core`: canonical windows on demand
//! and the CSV datasets of the convergence studies.

pub mod args;
pub mod canonical;
pub mod error;
pub mod experiments;
pub mod output;
pub mod window;

use serde_json::json;

pub use args::{Cli, Command};
pub use error::CliError;

use output::{sidecar_path, write_json, Environment};

/// Executes a parsed command line.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Canonical(args) => {
            canonical::execute(args)?;
            Ok(())
        }
        Command::Experiment { name, common, extra } => {
            let outcome = experiments::run_experiment(*name, common, extra)?;
            outcome.table.write(common.out.as_deref())?;
            if extra.json {
                let out = common
                    .out
                    .as_deref()
                    .ok_or_else(|| CliError::Usage("--json needs --out".into()))?;
                let sidecar = json!({
                    "config": experiments::echo(*name, common, extra),
                    "summary": outcome.summary,
                    "environment": Environment::current(),
                });
                write_json(&sidecar_path(out, "json"), &sidecar)?;
            }
            Ok(())
        }
    }
}
