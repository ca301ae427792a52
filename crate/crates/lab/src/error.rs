use thiserror::Error;

/// Failures of a lab command, split by the exit code they map to.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Input { path: String, source: std::io::Error },

    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),

    #[error("malformed report: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("numerical failure: {0}")]
    Numerical(logchol::Error),
}

impl From<logchol::Error> for LabError {
    fn from(e: logchol::Error) -> Self {
        match e {
            logchol::Error::Parse { .. } | logchol::Error::UnknownMetric(_) => LabError::Usage(e.to_string()),
            other => LabError::Numerical(other),
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

impl LabError {
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Numerical(_) => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
