//! Library-wide error type.

use crate::model::{EdgeId, FlowId, NodeId};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed topology document: {0}")]
    MalformedTopology(String),
    #[error("unknown node '{0}'")]
    UnknownNode(String),
    #[error("duplicate directed edge {a} -> {b}")]
    DuplicateEdge { a: String, b: String },
    #[error("capacity of edge {a} -> {b} must be positive and finite, got {capacity}")]
    BadCapacity { a: String, b: String, capacity: f64 },
    #[error("self-loop on node '{0}' is not allowed")]
    SelfLoop(String),
    #[error("node index {0} out of range")]
    NodeOutOfRange(NodeId),
    #[error("edge index {0} out of range")]
    EdgeOutOfRange(EdgeId),
    // Field names avoid `source`, which the derive reserves for error
    // chaining.
    #[error("no path from '{from}' to '{to}'")]
    NoPath { from: String, to: String },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid flow {id}: {reason}")]
    InvalidFlow { id: FlowId, reason: String },
    #[error("capacity range [{low}, {high}] is invalid: {reason}")]
    BadCapacityRange { low: f64, high: f64, reason: String },
    #[error("router '{0}' requires a rate view of the current allocation")]
    MissingRateView(&'static str),
    #[error("unknown router '{0}'")]
    UnknownRouter(String),
    #[error("unknown scheduling policy '{0}'")]
    UnknownPolicy(String),
    #[error("arrivals must be sorted by (arrival_time, id): flow {0} is out of order")]
    UnsortedArrivals(FlowId),
    #[error("flow {0} has no path assigned")]
    MissingPath(FlowId),
    #[error("instance too large: {count} conflicting flows exceed the cap of {cap}")]
    TooManyConflicts { count: usize, cap: usize },
    #[error("invalid traffic pattern: {0}")]
    InvalidPattern(String),
    #[error("invalid CDF table: {0}")]
    InvalidCdf(String),
    #[error("no bounded-Pareto shape reproduces mean {mean} on [{min}, {max}]")]
    NoValidShape { mean: f64, min: f64, max: f64 },
    #[error("invalid scenario config: {0}")]
    InvalidConfig(String),
    #[error("invalid state snapshot: {0}")]
    InvalidSnapshot(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("JSON parse error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
