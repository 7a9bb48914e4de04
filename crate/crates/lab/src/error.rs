use std::io;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {msg}")]
    Input { path: String, msg: String },
    /// A library call rejected its input; tagged with the stage that failed.
    #[error("{stage}: {msg}")]
    Stage { stage: &'static str, msg: String },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl LabError {
    /// 1 for usage and input problems, 2 for internal invariant violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Invariant(_) => 2,
            _ => 1,
        }
    }

    pub fn io(path: &Path, source: io::Error) -> Self {
        LabError::Io { path: path.display().to_string(), source }
    }

    pub fn input(path: &Path, msg: impl ToString) -> Self {
        LabError::Input { path: path.display().to_string(), msg: msg.to_string() }
    }
}

/// Tags a library error with the stage it came from.
pub trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T, LabError>;
}

impl<T, E: std::fmt::Display> StageExt<T> for Result<T, E> {
    fn stage(self, stage: &'static str) -> Result<T, LabError> {
        self.map_err(|e| LabError::Stage { stage, msg: e.to_string() })
    }
}
