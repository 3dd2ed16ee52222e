use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("TIFF page {page}: {message}")]
    Tiff { page: usize, message: String },

    #[error("raw volume: {0}")]
    Raw(String),

    #[error("flow file: {0}")]
    Flo(String),

    #[error("shape mismatch: {left} vs {right}")]
    ShapeMismatch { left: String, right: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid volume: {0}")]
    InvalidVolume(String),

    #[error("report: {0}")]
    Report(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn shape(left: (usize, usize), right: (usize, usize)) -> Self {
        Error::ShapeMismatch {
            left: format!("{}x{}", left.0, left.1),
            right: format!("{}x{}", right.0, right.1),
        }
    }
}
