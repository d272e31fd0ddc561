//! Minimum spanning forest by repeated minimum-edge picking and pointer
//! jumping, with cross edges stored at the subvertices.
//!
//! Every vertex starts as its own supervertex and keeps its incident edges
//! for the whole run. One iteration:
//!
//! 1. `PruneReq`: every vertex asks each remaining neighbor `u` for `D[u]`.
//! 2. `PruneRecv`: edges with `D[u] == D[v]` are dropped; each vertex sends
//!    its lightest remaining edge to its supervertex (min combiner).
//! 3. `Pick`: each supervertex takes the lightest edge it received and
//!    points at the supervertex on the other side. The picks form conjoined
//!    trees whose cycles have length 2.
//! 4. `Jump` (repeated): supervertices jump `D = D[D]`. In the first jump a
//!    vertex whose grandparent is itself sits on the cycle; the smaller of
//!    the pair becomes the new supervertex. Jumping stops after a jump in
//!    which no pointer changed.
//! 5. Subvertices ask their old supervertex for its new one; the answer is
//!    applied at the start of the next `PruneReq`.
//!
//! The run ends when no vertex has a remaining cross edge.

use std::cmp::Ordering;
use std::marker::PhantomData;

use crate::channel::Combiner;
use crate::engine::{AggregateOp, AggregateValue, Aggregator, Context, VertexProgram};
use crate::error::{Error, Result};
use crate::graph::{Edge, VertexId};

const HAS_EDGES: &str = "has_edges";
const CHANGED: &str = "changed";

/// An undirected edge ordered by `(weight, lower endpoint, upper endpoint)`.
/// Edges without a weight count as weight 1.
#[derive(Clone, Copy, Debug)]
pub struct MsfEdge<I> {
    pub weight: f64,
    pub lo: I,
    pub hi: I,
}

impl<I: VertexId> MsfEdge<I> {
    pub fn new(a: I, b: I, weight: f64) -> Self {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        MsfEdge { weight, lo, hi }
    }
}

impl<I: Ord> Ord for MsfEdge<I> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.weight
            .total_cmp(&o.weight)
            .then_with(|| self.lo.cmp(&o.lo))
            .then_with(|| self.hi.cmp(&o.hi))
    }
}

impl<I: Ord> PartialOrd for MsfEdge<I> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl<I: Ord> PartialEq for MsfEdge<I> {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl<I: Ord> Eq for MsfEdge<I> {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    PruneReq,
    PruneRecv,
    Pick,
    Jump { first: bool },
    SubUpdate,
}

/// Lightest cross edge of a subvertex and the supervertex it leads to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Candidate<I: VertexId> {
    pub edge: MsfEdge<I>,
    pub to: I,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MsfState<I: VertexId> {
    /// Supervertex pointer.
    pub d: I,
    /// Edges picked while this vertex was a supervertex.
    pub picked: Vec<MsfEdge<I>>,
    /// Remaining cross edges: `(edge, other endpoint)`.
    edges: Vec<(MsfEdge<I>, I)>,
    phase: Phase,
    /// Was a supervertex when the current iteration picked.
    jumping: bool,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Msf<I>(PhantomData<fn() -> I>);

impl<I> Msf<I> {
    pub fn new() -> Self {
        Msf(PhantomData)
    }
}

impl<I: VertexId> Msf<I> {
    /// The forest: union of all picked edges, ascending by rank.
    pub fn forest<'a>(states: impl IntoIterator<Item = &'a MsfState<I>>) -> Vec<MsfEdge<I>> {
        let mut all: Vec<MsfEdge<I>> = states
            .into_iter()
            .flat_map(|s| s.picked.iter().copied())
            .collect();
        all.sort();
        all.dedup();
        all
    }
}

fn lighter<I: VertexId>(a: &Candidate<I>, b: &Candidate<I>) -> Candidate<I> {
    if b.edge < a.edge {
        *b
    } else {
        *a
    }
}

impl<I: VertexId> VertexProgram for Msf<I> {
    type Id = I;
    type Value = MsfState<I>;
    type Message = Candidate<I>;
    type Response = I;

    fn init(&self, id: I, edges: &[Edge<I>]) -> MsfState<I> {
        let mut es: Vec<(MsfEdge<I>, I)> = edges
            .iter()
            .filter(|e| e.target != id)
            .map(|e| (MsfEdge::new(id, e.target, e.weight.unwrap_or(1.0)), e.target))
            .collect();
        es.sort_by_key(|e| e.0);
        MsfState {
            d: id,
            picked: Vec::new(),
            edges: es,
            phase: Phase::PruneReq,
            jumping: false,
        }
    }

    fn compute(
        &self,
        st: &mut MsfState<I>,
        msgs: &[Candidate<I>],
        ctx: &mut Context<'_, Self>,
    ) -> Result<()> {
        let id = ctx.id();
        let mut phase = st.phase;
        if let Phase::Jump { first: false } = phase {
            if !ctx.aggregated_bool(CHANGED)? {
                phase = Phase::SubUpdate;
            }
        }

        st.phase = match phase {
            Phase::PruneReq => {
                if !st.jumping && st.d != id {
                    st.d = *ctx.get_resp(&st.d)?;
                }
                for (_, u) in &st.edges {
                    ctx.request(*u);
                }
                Phase::PruneRecv
            }
            Phase::PruneRecv => {
                let mut kept = Vec::with_capacity(st.edges.len());
                for (e, u) in st.edges.drain(..) {
                    let du = *ctx.get_resp(&u)?;
                    if du != st.d {
                        kept.push((e, u, du));
                    }
                }
                // edges stay sorted, so the first is the lightest
                if let Some(&(edge, _, to)) = kept.first() {
                    ctx.send_msg(st.d, Candidate { edge, to });
                }
                ctx.aggregate(HAS_EDGES, AggregateValue::Bool(!kept.is_empty()))?;
                st.edges = kept.into_iter().map(|(e, u, _)| (e, u)).collect();
                Phase::Pick
            }
            Phase::Pick => {
                if !ctx.aggregated_bool(HAS_EDGES)? {
                    ctx.vote_to_halt();
                    return Ok(());
                }
                st.jumping = st.d == id;
                if st.jumping {
                    if let Some(best) = msgs.iter().copied().reduce(|a, b| lighter(&a, &b)) {
                        st.d = best.to;
                        st.picked.push(best.edge);
                    }
                    ctx.request(st.d);
                }
                Phase::Jump { first: true }
            }
            Phase::Jump { first } => {
                if st.jumping {
                    let grand = *ctx.get_resp(&st.d)?;
                    let before = st.d;
                    if first && grand == id {
                        // the pick cycle: the smaller endpoint becomes the root
                        if id < st.d {
                            st.d = id;
                        }
                    } else {
                        st.d = grand;
                    }
                    ctx.aggregate(CHANGED, AggregateValue::Bool(st.d != before))?;
                    ctx.request(st.d);
                }
                Phase::Jump { first: false }
            }
            Phase::SubUpdate => {
                if !st.jumping && st.d != id {
                    ctx.request(st.d);
                }
                Phase::PruneReq
            }
        };
        Ok(())
    }

    fn combiner(&self) -> Option<Combiner<Candidate<I>>> {
        Some(lighter::<I>)
    }

    fn respond(&self, _: I, st: &MsfState<I>) -> Option<I> {
        Some(st.d)
    }

    fn aggregators(&self) -> Vec<Aggregator> {
        vec![
            Aggregator::new(HAS_EDGES, AggregateOp::Or),
            Aggregator::new(CHANGED, AggregateOp::Or),
        ]
    }
}

/// Fails unless every edge weight is finite.
pub fn validate<I: VertexId>(graph: &crate::graph::Graph<I>) -> Result<()> {
    for (v, edges) in graph.vertices() {
        if let Some(e) = edges.iter().find(|e| e.weight.is_some_and(|w| !w.is_finite())) {
            return Err(Error::Algorithm(format!(
                "edge {v} - {} has non-finite weight",
                e.target
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, Config};
    use crate::graph::Graph;

    fn weights(f: &[MsfEdge<u64>]) -> Vec<f64> {
        f.iter().map(|e| e.weight).collect()
    }

    #[test]
    fn triangle() {
        let g = Graph::from_edges(
            false,
            true,
            [(1u64, 2u64, Some(1.0)), (2, 3, Some(2.0)), (1, 3, Some(3.0))],
        );
        let out = run(&g, &Msf::new(), &Config::with_workers(2)).unwrap();
        assert_eq!(weights(&Msf::forest(out.values.values())), vec![1.0, 2.0]);
    }

    #[test]
    fn conjoined_tree_root_is_smaller_cycle_vertex() {
        // picks: 5<->6 (cycle), 1->5, 2->1, 7->6
        let g = Graph::from_edges(
            false,
            true,
            [
                (5u64, 6u64, Some(1.0)),
                (1, 5, Some(2.0)),
                (6, 7, Some(3.0)),
                (2, 1, Some(4.0)),
            ],
        );
        let out = run(&g, &Msf::new(), &Config::with_workers(3)).unwrap();
        assert!(out.values.values().all(|s| s.d == 5));
        assert_eq!(Msf::forest(out.values.values()).len(), 4);
    }

    #[test]
    fn forest_of_two_components_and_isolated() {
        let mut g = Graph::from_edges(
            false,
            true,
            [(1u64, 2u64, Some(1.0)), (3, 4, Some(1.0)), (4, 5, Some(1.0)), (3, 5, Some(1.0))],
        );
        g.add_vertex(10);
        let out = run(&g, &Msf::new(), &Config::with_workers(2)).unwrap();
        let f = Msf::forest(out.values.values());
        assert_eq!(f.len(), 3);
        // ties resolve by endpoints: (3,4) and (3,5) beat (4,5)
        assert!(f.contains(&MsfEdge::new(3, 4, 1.0)) && f.contains(&MsfEdge::new(3, 5, 1.0)));
    }
}
