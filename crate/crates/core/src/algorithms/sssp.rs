//! Single-source shortest paths. Distances travel by `broadcast`; `relay`
//! adds the edge length, so mirrored and unmirrored vertices deliver the
//! same payloads.

use crate::channel::Combiner;
use crate::engine::{Context, VertexProgram};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, VertexId};

/// Final value: `Some(distance)` or `None` when unreachable. Edges without a
/// weight have length 1.
#[derive(Clone, Copy, Debug)]
pub struct Sssp<I> {
    pub source: I,
}

impl<I: VertexId> Sssp<I> {
    pub fn new(source: I) -> Self {
        Sssp { source }
    }

    /// Rejects negative or non-finite edge lengths.
    pub fn validate(graph: &Graph<I>) -> Result<()> {
        for (v, edges) in graph.vertices() {
            for e in edges {
                if let Some(w) = e.weight {
                    if w < 0.0 || !w.is_finite() {
                        return Err(Error::Algorithm(format!(
                            "edge {v} -> {} has length {w}; lengths must be finite and >= 0",
                            e.target
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn min_dist(a: &f64, b: &f64) -> f64 {
    a.min(*b)
}

impl<I: VertexId> VertexProgram for Sssp<I> {
    type Id = I;
    type Value = Option<f64>;
    type Message = f64;
    type Response = ();

    fn init(&self, _: I, _: &[Edge<I>]) -> Option<f64> {
        None
    }

    fn compute(&self, dist: &mut Option<f64>, msgs: &[f64], ctx: &mut Context<'_, Self>) -> Result<()> {
        let candidate = if ctx.superstep() == 1 {
            (ctx.id() == self.source).then_some(0.0)
        } else {
            msgs.iter().copied().reduce(f64::min)
        };
        if let Some(c) = candidate {
            if dist.is_none_or(|d| c < d) {
                *dist = Some(c);
                ctx.broadcast(c);
            }
        }
        ctx.vote_to_halt();
        Ok(())
    }

    fn combiner(&self) -> Option<Combiner<f64>> {
        Some(min_dist)
    }

    fn relay(&self, edge: &Edge<I>, d: &f64) -> f64 {
        d + edge.weight.unwrap_or(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, Config};
    use crate::mirror::MirrorThreshold;

    #[test]
    fn single_edge_and_unreachable() {
        let mut g = Graph::from_edges(true, true, [(1u64, 2u64, Some(5.0))]);
        g.add_vertex(3);
        let out = run(&g, &Sssp::new(1), &Config::default()).unwrap();
        assert_eq!(out.values[&1], Some(0.0));
        assert_eq!(out.values[&2], Some(5.0));
        assert_eq!(out.values[&3], None);
    }

    #[test]
    fn relay_adds_length_on_mirrored_vertex() {
        let g = Graph::from_edges(
            true,
            true,
            [(0u64, 1u64, Some(2.0)), (0, 2, Some(1.0)), (0, 3, Some(4.0)), (1, 3, Some(0.5))],
        );
        let cfg = Config {
            workers: 3,
            mirror: MirrorThreshold::Fixed(2.0),
            ..Config::default()
        };
        let out = run(&g, &Sssp::new(0), &cfg).unwrap();
        assert_eq!(out.report.mirror.mirrored_vertices, 1);
        assert_eq!(out.values[&1], Some(2.0));
        assert_eq!(out.values[&2], Some(1.0));
        assert_eq!(out.values[&3], Some(2.5));
    }

    #[test]
    fn negative_length_rejected() {
        let g = Graph::from_edges(true, true, [(1u64, 2u64, Some(-1.0))]);
        assert!(Sssp::validate(&g).is_err());
    }
}
