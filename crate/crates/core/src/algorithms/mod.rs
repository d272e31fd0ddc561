//! Vertex programs built on the engine.

pub mod attribute;
pub mod hashmin;
pub mod msf;
pub mod pagerank;
pub mod sssp;
pub mod sv;

use std::fmt::Display;
use std::io::Write;

use crate::error::Result;

pub use attribute::{attribute_of, AttributeMsg, AttributePush, AttributeReq};
pub use hashmin::HashMin;
pub use msf::{Msf, MsfEdge};
pub use pagerank::PageRank;
pub use sssp::Sssp;
pub use sv::ShiloachVishkin;

/// Writes one `id value` line per vertex.
pub fn write_results<I: Display, V, W: Write>(
    values: impl IntoIterator<Item = (I, V)>,
    mut render: impl FnMut(&V) -> String,
    mut out: W,
) -> Result<()> {
    for (id, v) in values {
        writeln!(out, "{id} {}", render(&v))?;
    }
    out.flush()?;
    Ok(())
}

/// Number of (possibly partial) rounds of `cycle` supersteps each.
pub fn rounds(supersteps: u64, cycle: u64) -> u64 {
    supersteps.div_ceil(cycle)
}
