use thiserror::Error;

/// Errors raised while validating inputs or producing outputs.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or combination of parameters is outside its valid range.
    #[error("invalid configuration for `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("malformed configuration document: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }

    /// The offending configuration key, when the error is tied to one.
    pub fn key(&self) -> Option<&str> {
        match self {
            Error::Config { key, .. } => Some(key),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
