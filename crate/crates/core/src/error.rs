use thiserror::Error;

use crate::units::{Bandwidth, ByteSize};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("effective link cap {effective} exceeds lane aggregate {aggregate}")]
    CapExceeded {
        effective: Bandwidth,
        aggregate: Bandwidth,
    },

    #[error("engine {engine} is not valid with endpoint {endpoint} in scenario `{scenario}`")]
    IncompatibleEngine {
        scenario: String,
        engine: String,
        endpoint: String,
    },

    #[error("non-positive rate for `{what}` in scenario `{scenario}`")]
    NonPositiveRate { scenario: String, what: String },

    #[error("invalid scenario `{scenario}`: {reason}")]
    InvalidScenario { scenario: String, reason: String },

    #[error("transfer of {requested} at offset {offset} exceeds capacity {capacity} by {overflow} bytes")]
    CapacityExceeded {
        requested: ByteSize,
        offset: ByteSize,
        capacity: ByteSize,
        overflow: u64,
    },

    #[error("invalid transfer request: {0}")]
    InvalidRequest(String),

    #[error("unknown RDMA generation `{0}`")]
    UnknownGeneration(String),

    #[error("sweep plan is empty: {0}")]
    EmptyPlan(String),

    #[error("event time regressed: {now} ns after {last} ns")]
    InvariantViolation { last: f64, now: f64 },

    #[error("no reference points for scenario `{0}`")]
    NoReferencePoints(String),

    #[error("objective is flat across the full bound range of {0:?}")]
    Unidentifiable(Vec<String>),

    #[error("sweep results do not cover reference points: {0:?}")]
    MissingCoverage(Vec<String>),

    #[error("report is empty")]
    EmptyReport,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("config parse error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, ModelError>;
