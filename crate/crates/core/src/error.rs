use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("labeling length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("dataset needs at least {min} points, got {got}")]
    TooFewPoints { min: usize, got: usize },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("{path}: row {row}, column {col}: {message}")]
    Ingest {
        path: PathBuf,
        row: usize,
        col: usize,
        message: String,
    },

    #[error("cannot access {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot compute a centroid of an empty cluster")]
    EmptyCluster,

    #[error("cluster count {k} out of range for {m} points")]
    InvalidK { k: usize, m: usize },

    #[error("cannot choose {k} distinct seeds: only {distinct} distinct rows")]
    DegenerateSeeds { k: usize, distinct: usize },

    #[error("covariance matrix is not positive definite (pivot {pivot} = {value})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("covariance matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("unknown builtin dataset `{0}`")]
    UnknownDataset(String),

    #[error("dataset `{0}` has no reference labels")]
    MissingLabels(String),

    #[error("invalid cluster id {id} (k = {k})")]
    InvalidCluster { id: usize, k: usize },

    #[error("degenerate partition: {0}")]
    DegeneratePartition(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid run spec: {0}")]
    InvalidSpec(String),

    #[error("malformed report: {0}")]
    MalformedReport(String),
}

impl Error {
    /// True for errors raised while reading input data from disk.
    pub fn is_ingestion(&self) -> bool {
        matches!(
            self,
            Error::Ingest { .. } | Error::Io { .. } | Error::EmptyDataset
        )
    }

    /// True for errors caused by an invalid run description.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidSpec(_) | Error::InvalidConfig(_) | Error::UnknownDataset(_)
        )
    }
}
