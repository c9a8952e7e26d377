use sidur_core::SidurError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] SidurError),

    #[error("I/O error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("invalid configuration in {path}: {message}")]
    Config { path: String, message: String },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub(crate) fn io(path: &std::path::Path, e: impl std::fmt::Display) -> Self {
        Self::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }
    }

    /// 2 for input/output and schema problems, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Io { .. } | Self::Config { .. } => 2,
            Self::Model(e) => match e {
                SidurError::Io { .. } | SidurError::Schema(_) | SidurError::Parse { .. } => 2,
                _ => 1,
            },
            Self::Usage(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
