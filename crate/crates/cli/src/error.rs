use std::path::PathBuf;

use esgpairs::ErrorKind;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: esgpairs::Error,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed table {path}: {reason}")]
    Table { path: PathBuf, reason: String },

    #[error("nothing to emit: {0}")]
    Empty(String),
}

impl CliError {
    pub fn stage(stage: &'static str) -> impl FnOnce(esgpairs::Error) -> Self {
        move |source| Self::Stage { stage, source }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| Self::Io { path, source }
    }

    /// 2 config, 3 data, 4 empty universe or no pairs, 5 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Stage { source, .. } => match source.kind() {
                ErrorKind::Config => 2,
                ErrorKind::Data => 3,
                ErrorKind::Empty => 4,
                ErrorKind::Io => 5,
            },
            Self::Table { .. } => 3,
            Self::Empty(_) => 4,
            Self::Io { .. } => 5,
        }
    }
}
