use std::path::PathBuf;

use thiserror::Error;

/// Every failure the toolkit reports.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("unsupported corruption kind: {0}")]
    UnsupportedKind(String),

    #[error("missing asset: {0}")]
    MissingAsset(String),

    #[error("empty evaluation: {0}")]
    EmptyEvaluation(String),

    #[error("invalid depth: {0}")]
    InvalidDepth(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("misaligned cells: {0}")]
    MisalignedCells(String),

    #[error("degenerate baseline: {0}")]
    DegenerateBaseline(String),

    #[error("degenerate clean score: clean DEE {0} must be < 1")]
    DegenerateClean(f64),

    #[error("missing cells: {}", format_missing(.0))]
    MissingCells(Vec<(String, u8)>),

    #[error("profile mismatch: {0}")]
    Profile(String),

    #[error("invalid request: {0}")]
    InvalidRequest(String),

    #[error("missing prediction: {}", .0.display())]
    MissingPrediction(PathBuf),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("schema version mismatch: expected {expected}, found {found}")]
    SchemaVersion { expected: u32, found: u32 },

    #[error("config error: {0}")]
    Config(String),

    #[error("decode error in {}: {message}", path.display())]
    Decode { path: PathBuf, message: String },

    #[error("{} file(s) failed", .0.len())]
    PartialFailure(Vec<(PathBuf, String)>),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn format_missing(cells: &[(String, u8)]) -> String {
    cells
        .iter()
        .map(|(k, s)| format!("{k}@{s}"))
        .collect::<Vec<_>>()
        .join(", ")
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
