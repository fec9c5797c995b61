//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("partition is not connected")]
    DisconnectedPartition,
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("enumeration guard exceeded: {what} ({size} > {limit})")]
    GuardExceeded { what: String, size: usize, limit: usize },
    #[error("graph is not series-parallel with terminals ({0}, {1})")]
    NotSeriesParallel(usize, usize),
    #[error("graph has treewidth greater than 2")]
    TreewidthExceeded,
    #[error("remainder bound not met for d = {d}: modulus too small")]
    InsufficientD { d: u64 },
    #[error("node {0} does not have degree 3")]
    NotCubic(usize),
    #[error("face {0} is not a triangle")]
    NotTriangulation(usize),
    #[error("probability {0} outside [0, 1]")]
    BadProbability(String),
    #[error("empty support: {0}")]
    EmptySupport(String),
    #[error("no valid split after {0} tree draws")]
    RetriesExhausted(usize),
    #[error("inadmissible state: {0}")]
    Inadmissible(String),
    #[error("schema error at {location}: {message}")]
    Schema { location: String, message: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
