use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid `{field}`: {reason}")]
    Spec { field: &'static str, reason: String },
    #[error("missing required setting `{0}`")]
    Missing(&'static str),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] fragsim_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("config serialisation: {0}")]
    TomlSer(#[from] toml::ser::Error),
    #[error("malformed record file: {0}")]
    Record(String),
}

impl HarnessError {
    pub fn spec(field: &'static str, reason: impl Into<String>) -> Self {
        HarnessError::Spec {
            field,
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
