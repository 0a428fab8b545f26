use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("row {row}, column {column}: {message}")]
    MalformedRow {
        row: usize,
        column: String,
        message: String,
    },
    #[error("no data rows")]
    NoDataRows,
    #[error("{0}")]
    Domain(String),
    #[error("invalid scenario: {0}")]
    InvalidConfig(String),
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
