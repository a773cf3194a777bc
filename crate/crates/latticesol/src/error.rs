use std::path::PathBuf;

use thiserror::Error;

/// Failure of a command, mapped onto the process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: line {line}: {message}", path.display())]
    Format { path: PathBuf, line: usize, message: String },
    #[error("{0}")]
    Core(latticesol_core::Error),
    /// A solver gave up; partial artifacts have already been written.
    #[error("{0}")]
    Convergence(String),
}

impl CliError {
    pub fn config(key: &str, message: impl Into<String>) -> Self {
        CliError::Config { key: key.to_owned(), message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if !e.is_precondition() => 3,
            CliError::Convergence(_) => 3,
            _ => 2,
        }
    }
}

impl From<latticesol_core::Error> for CliError {
    fn from(e: latticesol_core::Error) -> Self {
        CliError::Core(e)
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
