use std::path::PathBuf;

use thiserror::Error;

/// Input errors; every variant maps to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{}{message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Invalid { line: Option<usize>, message: String },

    #[error(transparent)]
    Core(Box<sortcut_core::Error>),
}

impl From<sortcut_core::Error> for CliError {
    fn from(e: sortcut_core::Error) -> Self {
        CliError::Core(Box::new(e))
    }
}
