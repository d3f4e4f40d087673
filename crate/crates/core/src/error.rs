use std::path::PathBuf;

use thiserror::Error;

/// Errors produced across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid code parameters: {0}")]
    InvalidCode(String),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("malformed alist: {0}")]
    Alist(String),
    #[error("infeasible degree profile: {0}")]
    DegreeProfile(String),
    #[error("invalid mapping: {0}")]
    Mapping(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("image error: {0}")]
    Image(String),
    #[error("no encoder nodes available")]
    NoNodes,
    #[error("missing file: {}", .0.display())]
    MissingFile(PathBuf),
    #[error("gain table has no entry for {0}")]
    MissingCell(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
