use std::fmt;
use std::io;
use std::path::Path;

use gabiter_core::GaborError;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(GaborError),
    Io(String),
    /// The iteration was flagged as diverging or oscillating.
    Diverged(String),
}

impl CliError {
    pub fn io(path: &Path, e: io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    /// 2 for "not a frame", 3 for divergence, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(GaborError::NotAFrame { .. }) => 2,
            CliError::Diverged(_) => 3,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Diverged(m) => write!(f, "iteration diverged: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<GaborError> for CliError {
    fn from(e: GaborError) -> Self {
        CliError::Core(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
