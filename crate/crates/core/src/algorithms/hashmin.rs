//! Connected components by minimum-label propagation. Needs O(diameter)
//! supersteps.

use std::marker::PhantomData;

use crate::channel::Combiner;
use crate::engine::{Context, VertexProgram};
use crate::error::Result;
use crate::graph::{Edge, VertexId};

/// Final value: the smallest id in the vertex's component. Expects an
/// undirected graph.
#[derive(Clone, Copy, Debug, Default)]
pub struct HashMin<I>(PhantomData<fn() -> I>);

impl<I> HashMin<I> {
    pub fn new() -> Self {
        HashMin(PhantomData)
    }
}

fn min_id<I: VertexId>(a: &I, b: &I) -> I {
    *a.min(b)
}

impl<I: VertexId> VertexProgram for HashMin<I> {
    type Id = I;
    type Value = I;
    type Message = I;
    type Response = ();

    fn init(&self, id: I, _: &[Edge<I>]) -> I {
        id
    }

    fn compute(&self, min: &mut I, msgs: &[I], ctx: &mut Context<'_, Self>) -> Result<()> {
        if ctx.superstep() == 1 {
            ctx.broadcast(*min);
        } else if let Some(m) = msgs.iter().min() {
            if m < min {
                *min = *m;
                ctx.broadcast(*m);
            }
        }
        ctx.vote_to_halt();
        Ok(())
    }

    fn combiner(&self) -> Option<Combiner<I>> {
        Some(min_id::<I>)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, Config};
    use crate::graph::Graph;

    #[test]
    fn path_of_three() {
        let g = Graph::from_edges(false, false, [(1u64, 2u64, None), (2, 3, None)]);
        let out = run(&g, &HashMin::new(), &Config::with_workers(2)).unwrap();
        assert!(out.values.values().all(|m| *m == 1));
        assert_eq!(out.report.supersteps, 4);
    }

    #[test]
    fn isolated_and_two_components() {
        let mut g = Graph::from_edges(false, false, [(1u64, 2u64, None), (5, 6, None)]);
        g.add_vertex(9);
        let out = run(&g, &HashMin::new(), &Config::default()).unwrap();
        let mins: Vec<u64> = out.values.values().copied().collect();
        assert_eq!(mins, vec![1, 1, 5, 5, 9]);
    }
}
