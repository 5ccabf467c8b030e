use std::path::PathBuf;

use thiserror::Error;

/// Errors from file handling, configuration and the numeric core.
///
/// Row and column numbers are 1-based file positions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("FileNotFound: {0}")]
    FileNotFound(PathBuf),
    #[error("EmptyFile: {0} has no data rows")]
    EmptyFile(PathBuf),
    #[error("RaggedRows: row {row} has {found} columns, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("NonNumericCell: row {row}, column {col} holds {value:?}")]
    NonNumericCell { row: usize, col: usize, value: String },
    #[error("UnknownLabelColumn: {0:?}")]
    UnknownLabelColumn(String),
    #[error("BadDump: {0}")]
    BadDump(String),
    #[error("Config: {0}")]
    Config(String),
    #[error("Io: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("Csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] edd_core::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::FileNotFound(path)
        } else {
            Error::Io { path, source }
        }
    }

    /// True for errors caused by how the tool was invoked rather than by the data.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Config(_) | Error::UnknownLabelColumn(_))
    }
}
