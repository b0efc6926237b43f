use std::io;

use thiserror::Error;

/// Exit codes: 0 success, 1 negative verdict, 2 unknown, 64 usage, 65 data.
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {msg}")]
    Data { path: String, msg: String },
    #[error(transparent)]
    Lib(#[from] subkit::Error),
}

impl CliError {
    pub fn data(path: &str, e: subkit::Error) -> Self {
        CliError::Data {
            path: path.to_string(),
            msg: e.to_string(),
        }
    }

    pub fn json(path: &str, e: serde_json::Error) -> Self {
        CliError::Data {
            path: path.to_string(),
            msg: format!("invalid JSON: {e}"),
        }
    }

    pub fn wrong_kind(path: &str, want: &str, got: &str) -> Self {
        CliError::Data {
            path: path.to_string(),
            msg: format!("expected {want}, found a {got}"),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Lib(subkit::Error::Cancelled | subkit::Error::WorkLimit(_)) => EXIT_UNKNOWN,
            CliError::Io { .. } | CliError::Data { .. } | CliError::Lib(_) => EXIT_DATA,
        }
    }
}
