use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(thiserror::Error, Debug)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Input data violates a structural rule (duplicate ids, bad records).
    #[error("{0}")]
    Validation(String),

    /// Query text did not parse. `position` is the 1-based character column.
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    /// An operation was called outside its contract.
    #[error("{0}")]
    Usage(String),

    #[error("unknown {kind}: {name}")]
    Lookup { kind: &'static str, name: String },

    /// Query is syntactically valid but has no meaning for evaluation.
    #[error("cannot evaluate query: {0}")]
    Eval(String),

    #[error("bad file format: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
