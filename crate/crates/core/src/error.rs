use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("document contains no ink")]
    EmptyDocument,

    #[error("coded sequence is empty")]
    EmptySequence,

    #[error("position {pos} has no full neighbourhood in a sequence of length {len}")]
    OutOfRange { pos: usize, len: usize },

    #[error("invalid symbol {0:?} in coded sequence (expected '0'..'3')")]
    InvalidSymbol(char),

    #[error("image is not bi-level: {0}")]
    NotBinary(String),

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("at least 2 documents are required, got {0}")]
    TooFewDocuments(usize),

    #[error("target cluster count {target} exceeds current count {current}")]
    InvalidTarget { target: usize, current: usize },

    #[error("invalid cluster count k={k} for {n} documents")]
    InvalidK { k: usize, n: usize },

    #[error("cluster {0} is empty")]
    EmptyCluster(usize),

    #[error("unknown class {0:?}")]
    UnknownClass(String),

    #[error("invalid synthetic profile {name:?}: {reason}")]
    InvalidProfile { name: String, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("stage `{stage}` failed on document {doc_id:?}: {source}")]
    Stage {
        stage: &'static str,
        doc_id: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn in_stage(self, stage: &'static str, doc_id: impl Into<String>) -> Self {
        Error::Stage {
            stage,
            doc_id: doc_id.into(),
            source: Box::new(self),
        }
    }

    /// True for errors caused by invalid parameters or configuration rather
    /// than by the data being processed.
    pub fn is_config_error(&self) -> bool {
        match self {
            Error::InvalidParameter(_)
            | Error::InvalidTarget { .. }
            | Error::InvalidK { .. }
            | Error::InvalidProfile { .. } => true,
            Error::Stage { source, .. } => source.is_config_error(),
            _ => false,
        }
    }
}
