use super::worker::{Outbox, Route};
use super::{AggregateValue, BroadcastTrace, Env, VertexProgram};
use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::reqresp::ResponseTable;

/// Handle passed to [`VertexProgram::compute`]. It is bound to one vertex
/// for the duration of one call, so every channel operation is only
/// reachable from inside compute.
pub struct Context<'w, P: VertexProgram> {
    pub(super) env: &'w Env<'w, P>,
    pub(super) worker: usize,
    pub(super) id: P::Id,
    pub(super) edges: &'w [Edge<P::Id>],
    pub(super) route: Option<&'w Route>,
    pub(super) responses: &'w ResponseTable<P::Id, P::Response>,
    pub(super) out: &'w mut Outbox<P>,
    pub(super) halted: bool,
    pub(super) requested: Vec<P::Id>,
}

impl<'w, P: VertexProgram> Context<'w, P> {
    pub fn id(&self) -> P::Id {
        self.id
    }

    /// The vertex's out-edges in load order.
    pub fn edges(&self) -> &'w [Edge<P::Id>] {
        self.edges
    }

    pub fn degree(&self) -> usize {
        self.edges.len()
    }

    /// Current superstep, starting at 1.
    pub fn superstep(&self) -> u64 {
        self.env.superstep
    }

    pub fn worker(&self) -> usize {
        self.worker
    }

    pub fn num_workers(&self) -> usize {
        self.env.partitioner.workers()
    }

    pub fn num_vertices(&self) -> usize {
        self.env.num_vertices
    }

    pub fn worker_of(&self, id: &P::Id) -> usize {
        self.env.partitioner.worker_of(id)
    }

    pub fn is_mirrored(&self) -> bool {
        self.route.is_some()
    }

    pub fn vote_to_halt(&mut self) {
        self.halted = true;
    }

    /// Sends `msg` to `target` through the regular channel, unchanged.
    pub fn send_msg(&mut self, target: P::Id, msg: P::Message) {
        self.out.msgs.push(&self.env.partitioner, target, msg);
        self.out.stats.msg_sent += 1;
    }

    /// Sends `msg` along out-edge `edge`; `relay` runs here, on the sender.
    pub fn send_along(&mut self, edge: usize, msg: &P::Message) {
        let e = &self.edges[edge];
        let relayed = self.env.program.relay(e, msg);
        self.send_msg(e.target, relayed);
    }

    /// Delivers `msg` to every out-neighbor. Mirrored vertices send one
    /// message per mirror and `relay` runs on the receiving worker; other
    /// vertices fall back to one [`send_along`](Self::send_along) per edge.
    pub fn broadcast(&mut self, msg: P::Message) {
        let wire_sends = match self.route {
            Some(route) => {
                for &w in &route.remote {
                    self.out.mirror[w].push((self.id, msg.clone()));
                }
                self.out.stats.mir_sent += route.remote.len() as u64;
                if route.local {
                    self.out.mirror[self.worker].push((self.id, msg));
                    self.out.stats.mir_local += 1;
                }
                route.remote.len() as u64
            }
            None => {
                let mut remote = 0;
                for k in 0..self.edges.len() {
                    if self.env.partitioner.worker_of(&self.edges[k].target) != self.worker {
                        remote += 1;
                    }
                    self.send_along(k, &msg);
                }
                remote
            }
        };
        if self.env.trace.broadcasts {
            self.out.broadcasts.push(BroadcastTrace {
                superstep: self.env.superstep,
                vertex: self.id,
                degree: self.edges.len(),
                mirrored: self.route.is_some(),
                wire_sends,
            });
        }
    }

    /// Asks for `u`'s `respond()` value, readable next superstep through
    /// [`get_resp`](Self::get_resp).
    pub fn request(&mut self, u: P::Id) {
        self.out.requests.insert(&self.env.partitioner, u);
        if self.env.trace.requests && !self.requested.contains(&u) {
            self.requested.push(u);
            *self.out.requesters.entry(u).or_insert(0) += 1;
        }
    }

    /// Pushes this vertex's `respond()` value to the response table of
    /// `requester`'s worker without waiting for a request.
    pub fn respond_to(&mut self, requester: P::Id) {
        let dest = self.env.partitioner.worker_of(&requester);
        self.out.explicit[dest].insert(self.id);
    }

    /// The value `u` responded with at the end of the previous superstep.
    pub fn get_resp(&self, u: &P::Id) -> Result<&'w P::Response> {
        self.responses.get(u)
    }

    pub fn has_resp(&self, u: &P::Id) -> bool {
        self.responses.contains(u)
    }

    pub fn aggregate(&mut self, name: &str, value: AggregateValue) -> Result<()> {
        let slot = self.env.registry.lookup(name)?;
        self.env
            .registry
            .accumulate(slot, &mut self.out.aggregates[slot], value)
    }

    /// Merge of all contributions made in the previous superstep.
    pub fn aggregated(&self, name: &str) -> Result<AggregateValue> {
        let slot = self.env.registry.lookup(name)?;
        Ok(self.env.aggregates[slot])
    }

    pub fn aggregated_bool(&self, name: &str) -> Result<bool> {
        self.aggregated(name)?
            .as_bool()
            .ok_or_else(|| Error::AggregatorType {
                name: name.to_string(),
                expected: "boolean",
            })
    }
}

impl<P: VertexProgram> std::fmt::Debug for Context<'_, P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Context")
            .field("worker", &self.worker)
            .field("vertex", &self.id)
            .field("superstep", &self.env.superstep)
            .finish()
    }
}
