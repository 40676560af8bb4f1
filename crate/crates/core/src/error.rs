use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid header: {0}")]
    InvalidHeader(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid headers are not aligned: {0}")]
    Misaligned(String),

    #[error("no source cells")]
    NoSourceCells,

    #[error("invalid feature {feature}: {reason}")]
    InvalidFeature { feature: String, reason: String },

    #[error("unknown role `{role}` on feature {feature}")]
    UnknownRole { feature: String, role: String },

    #[error("DEM must be at least 3x3, got {ncols}x{nrows}")]
    DemTooSmall { ncols: usize, nrows: usize },

    #[error("non-finite value: {0}")]
    NonFinite(f64),

    #[error("negative slope: {0}")]
    NegativeSlope(f64),

    #[error("invalid buffer radii: {0}")]
    InvalidRadii(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("infeasible synthetic scene: {0}")]
    Infeasible(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
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

    /// True for errors caused by the run configuration rather than the data.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_)
                | Error::InvalidRadii(_)
                | Error::InvalidWeights(_)
                | Error::Infeasible(_)
        )
    }
}
