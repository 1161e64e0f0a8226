use std::path::{Path, PathBuf};

use thiserror::Error;

/// Exit statuses of the `ctinv` binary.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const NO_ADMISSIBLE: i32 = 3;
    pub const UNSETTLED: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}line {line}: {message}", file.as_ref().map(|f| format!("{}: ", f.display())).unwrap_or_default())]
    Parse {
        file: Option<PathBuf>,
        line: usize,
        message: String,
    },

    #[error("{0}")]
    Usage(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("no admissible shifted set: {0}")]
    NoAdmissible(String),

    #[error("admissibility not settled: {0}")]
    Unsettled(String),

    #[error(transparent)]
    Core(#[from] ctinv_core::Error),

    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Self::Parse {
            file: None,
            line,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Attaches a file name to a parse error.
    pub fn in_file(self, path: &Path) -> Self {
        match self {
            Self::Parse { line, message, .. } => Self::Parse {
                file: Some(path.to_path_buf()),
                line,
                message,
            },
            other => other,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse { .. } | Self::Usage(_) | Self::Config(_) => exit::PARSE,
            Self::NoAdmissible(_) | Self::Core(ctinv_core::Error::NoValidT(_)) => {
                exit::NO_ADMISSIBLE
            }
            Self::Unsettled(_) => exit::UNSETTLED,
            _ => exit::FAILURE,
        }
    }
}
