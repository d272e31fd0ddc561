use thiserror::Error;

use crate::report::RunReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("message sent to unknown vertex {target} in superstep {superstep}")]
    UnknownTarget { target: String, superstep: u64 },

    #[error("respond() is undefined for requested vertex {0}")]
    RespondUndefined(String),

    #[error("no response for vertex {0} in this superstep's response table")]
    MissingResponse(String),

    #[error("unknown aggregator `{0}`")]
    UnknownAggregator(String),

    #[error("aggregator `{name}` expects {expected} values")]
    AggregatorType { name: String, expected: &'static str },

    #[error("superstep limit {limit} exceeded")]
    SuperstepLimit { limit: u64, report: Box<RunReport> },

    #[error("{0}")]
    Algorithm(String),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}
