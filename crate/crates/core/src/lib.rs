//! A vertex-centric bulk-synchronous graph engine.
//!
//! Vertex programs talk through three channels:
//!
//! * the message channel ([`Context::send_msg`]), with optional sender-side
//!   combining;
//! * the mirror channel ([`Context::broadcast`]), which replicates the
//!   adjacency of high-degree vertices so one message per worker suffices;
//! * the request-respond channel ([`Context::request`] and
//!   [`Context::get_resp`]), which deduplicates reads of remote vertex
//!   values per worker.
//!
//! Every run returns a [`RunReport`] with per-superstep, per-worker message
//! counters.

pub mod algorithms;
pub mod channel;
pub mod engine;
pub mod error;
pub mod generate;
pub mod graph;
pub mod metrics;
pub mod mirror;
pub mod report;
pub mod reqresp;

pub use channel::Combiner;
pub use engine::{
    run, AggregateOp, AggregateValue, Aggregator, BroadcastTrace, Config, Context, FlushTrace,
    RequestTrace, RunOutput, Trace, TraceConfig, UnknownTargetPolicy, VertexProgram,
};
pub use error::{Error, Result};
pub use graph::{load_edge_list, partition, DegreeStats, Edge, Graph, PairId, Partitioner, VertexId};
pub use mirror::{compute_threshold, MirrorThreshold};
pub use report::{RunReport, SuperstepStats, WorkerStats};
