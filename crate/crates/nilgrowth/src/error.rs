use std::path::PathBuf;

/// Errors surfaced by the experiment layer.
#[derive(Debug, thiserror::Error)]
pub enum NilError {
    #[error(transparent)]
    Core(#[from] nilgrowth_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl NilError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        NilError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, NilError::Core(nilgrowth_core::Error::Budget { .. }))
    }

    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            NilError::Verification(_) | NilError::Core(nilgrowth_core::Error::Structural(_))
        )
    }
}

pub type Result<T> = std::result::Result<T, NilError>;
