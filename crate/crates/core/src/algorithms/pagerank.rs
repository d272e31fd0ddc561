//! PageRank with aggregator-driven convergence.
//!
//! Contributions travel as fixed-point integers with 90 fraction bits and
//! are summed exactly, so the result does not depend on message order,
//! combining, mirroring or the number of workers. Mass of vertices without
//! out-edges is not redistributed.

use std::marker::PhantomData;

use crate::channel::Combiner;
use crate::engine::{AggregateOp, AggregateValue, Aggregator, Context, VertexProgram};
use crate::error::Result;
use crate::graph::{Edge, VertexId};

const FRAC_BITS: i32 = 90;
const CONVERGED: &str = "converged";

/// `x` in units of 2^-90, truncated toward zero.
pub fn to_fixed(x: f64) -> i128 {
    (x * 2f64.powi(FRAC_BITS)) as i128
}

pub fn from_fixed(s: i128) -> f64 {
    s as f64 / 2f64.powi(FRAC_BITS)
}

fn add(a: &i128, b: &i128) -> i128 {
    a + b
}

#[derive(Clone, Copy, Debug)]
pub struct PageRank<I> {
    /// A vertex has converged once its value moves by less than this.
    pub epsilon: f64,
    /// Stop after this superstep even without convergence.
    pub max_supersteps: Option<u64>,
    _id: PhantomData<fn() -> I>,
}

impl<I> PageRank<I> {
    pub fn new(epsilon: f64) -> Self {
        PageRank {
            epsilon,
            max_supersteps: None,
            _id: PhantomData,
        }
    }

    pub fn with_max_supersteps(mut self, limit: u64) -> Self {
        self.max_supersteps = Some(limit);
        self
    }
}

impl<I> Default for PageRank<I> {
    fn default() -> Self {
        PageRank::new(0.01)
    }
}

impl<I: VertexId> VertexProgram for PageRank<I> {
    type Id = I;
    type Value = f64;
    type Message = i128;
    type Response = ();

    fn init(&self, _: I, _: &[Edge<I>]) -> f64 {
        0.0
    }

    fn compute(&self, pr: &mut f64, msgs: &[i128], ctx: &mut Context<'_, Self>) -> Result<()> {
        let n = ctx.num_vertices() as f64;
        let step = ctx.superstep();
        if step == 1 {
            *pr = 1.0 / n;
        } else {
            // the aggregate is vacuously true in superstep 2
            if step >= 3 && ctx.aggregated_bool(CONVERGED)? {
                ctx.vote_to_halt();
                return Ok(());
            }
            let sum: i128 = msgs.iter().sum();
            let next = 0.15 / n + 0.85 * from_fixed(sum);
            ctx.aggregate(CONVERGED, AggregateValue::Bool((next - *pr).abs() < self.epsilon))?;
            *pr = next;
        }
        if self.max_supersteps == Some(step) {
            ctx.vote_to_halt();
            return Ok(());
        }
        if ctx.degree() > 0 {
            ctx.broadcast(to_fixed(*pr / ctx.degree() as f64));
        }
        Ok(())
    }

    fn combiner(&self) -> Option<Combiner<i128>> {
        Some(add)
    }

    fn aggregators(&self) -> Vec<Aggregator> {
        vec![Aggregator::new(CONVERGED, AggregateOp::And)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, Config};
    use crate::graph::Graph;

    #[test]
    fn fixed_point_round_trip() {
        for x in [0.0, 1.0, 0.25, 1e-6, 0.123456789] {
            assert!((from_fixed(to_fixed(x)) - x).abs() < 1e-26);
        }
    }

    #[test]
    fn single_vertex() {
        let mut g: Graph<u64> = Graph::new(true, false);
        g.add_vertex(0);
        let out = run(&g, &PageRank::new(0.01), &Config::default()).unwrap();
        assert!((out.values[&0] - 0.15).abs() < 1e-15);
        assert_eq!(out.report.supersteps, 4);
    }

    #[test]
    fn two_cycle_is_symmetric() {
        let g = Graph::from_edges(true, false, [(0u64, 1u64, None), (1, 0, None)]);
        let out = run(&g, &PageRank::new(1e-9), &Config::default()).unwrap();
        assert_eq!(out.values[&0], 0.5);
        assert_eq!(out.values[&1], 0.5);
    }

    #[test]
    fn superstep_cap() {
        let g = Graph::from_edges(true, false, [(0u64, 1u64, None), (1, 0, None), (1, 2, None)]);
        let out = run(&g, &PageRank::new(0.0).with_max_supersteps(5), &Config::default()).unwrap();
        assert_eq!(out.report.supersteps, 5);
    }
}
