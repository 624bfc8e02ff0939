use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("{}:{line}: {message}", path.display())]
    Parse { path: PathBuf, line: u64, message: String },

    #[error("{}", estimation_message(subject.as_deref(), source))]
    Estimation {
        subject: Option<String>,
        #[source]
        source: neststat::Error,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

fn estimation_message(subject: Option<&str>, source: &neststat::Error) -> String {
    match subject {
        Some(s) => format!("subject '{s}': {source}"),
        None => source.to_string(),
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Usage(_) => 2,
            CliError::Parse { .. } => 3,
            CliError::Estimation { .. } => 4,
        }
    }

    pub(crate) fn parse(path: &std::path::Path, line: u64, message: impl Into<String>) -> Self {
        CliError::Parse { path: path.to_path_buf(), line, message: message.into() }
    }

    pub(crate) fn io(path: &std::path::Path, source: io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub(crate) fn group(source: neststat::Error) -> Self {
        CliError::Estimation { subject: None, source }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
