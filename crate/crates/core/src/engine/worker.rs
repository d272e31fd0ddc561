use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::context::Context;
use super::{AggregateValue, BroadcastTrace, Env, FlushTrace, UnknownTargetPolicy, VertexProgram};
use crate::channel::{IncomingBufferTable, OutgoingBuffers};
use crate::error::{Error, Result};
use crate::graph::{mix64, Edge};
use crate::reqresp::{RequestSets, ResponseSets, ResponseTable};
use crate::report::WorkerStats;

/// Home-side mirror routing of one vertex.
#[derive(Clone, Debug)]
pub(crate) struct Route {
    pub remote: Vec<usize>,
    /// Whether the home worker itself owns some of the neighbors.
    pub local: bool,
}

/// Everything a worker produces during one compute phase.
pub(crate) struct Outbox<P: VertexProgram> {
    pub msgs: OutgoingBuffers<P::Id, P::Message>,
    pub mirror: Vec<Vec<(P::Id, P::Message)>>,
    pub requests: RequestSets<P::Id>,
    /// Local responders per destination worker.
    pub explicit: Vec<BTreeSet<P::Id>>,
    pub aggregates: Vec<AggregateValue>,
    pub stats: WorkerStats,
    /// Distinct requesting vertices per requested id (tracing only).
    pub requesters: BTreeMap<P::Id, u64>,
    pub broadcasts: Vec<BroadcastTrace<P::Id>>,
}

impl<P: VertexProgram> Outbox<P> {
    fn new(workers: usize, aggregates: Vec<AggregateValue>) -> Self {
        Outbox {
            msgs: OutgoingBuffers::new(workers),
            mirror: (0..workers).map(|_| Vec::new()).collect(),
            requests: RequestSets::new(workers),
            explicit: (0..workers).map(|_| BTreeSet::new()).collect(),
            aggregates,
            stats: WorkerStats::default(),
            requesters: BTreeMap::new(),
            broadcasts: Vec::new(),
        }
    }
}

/// Per-vertex request accounting on the owning worker (tracing only).
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct ServedRequest {
    pub requests_received: u64,
    pub responses_sent: u64,
}

pub(crate) struct Worker<P: VertexProgram> {
    pub index: usize,
    pub ids: Vec<P::Id>,
    edges: Vec<Vec<Edge<P::Id>>>,
    pub values: Vec<P::Value>,
    halted: Vec<bool>,
    inbox: IncomingBufferTable<P::Id, P::Message>,
    routes: Vec<Option<Route>>,
    /// Mirror fan-out lists resident here: vertex -> (local slot, edge).
    mirrors: HashMap<P::Id, Vec<(usize, Edge<P::Id>)>>,
    responses: ResponseTable<P::Id, P::Response>,
    pub out: Outbox<P>,
}

impl<P: VertexProgram> Worker<P> {
    pub fn new(
        index: usize,
        workers: usize,
        vertices: Vec<(P::Id, Vec<Edge<P::Id>>)>,
        program: &P,
        aggregates: Vec<AggregateValue>,
    ) -> Self {
        let ids: Vec<P::Id> = vertices.iter().map(|(id, _)| *id).collect();
        let values = vertices.iter().map(|(id, e)| program.init(*id, e)).collect();
        let n = ids.len();
        Worker {
            index,
            inbox: IncomingBufferTable::new(&ids),
            ids,
            edges: vertices.into_iter().map(|(_, e)| e).collect(),
            values,
            halted: vec![false; n],
            routes: vec![None; n],
            mirrors: HashMap::new(),
            responses: ResponseTable::default(),
            out: Outbox::new(workers, aggregates),
        }
    }

    pub fn install_route(&mut self, v: &P::Id, remote: Vec<usize>, local: bool) {
        if let Some(slot) = self.inbox.slot(v) {
            self.routes[slot] = Some(Route { remote, local });
        }
    }

    pub fn install_mirror(&mut self, v: P::Id, edges: &[Edge<P::Id>]) {
        let list = edges
            .iter()
            .map(|e| {
                let slot = self
                    .inbox
                    .slot(&e.target)
                    .expect("mirror neighbor must be resident on the mirror's worker");
                (slot, *e)
            })
            .collect();
        self.mirrors.insert(v, list);
    }

    /// Runs compute() on every vertex that is active or has mail.
    pub fn compute(&mut self, env: &Env<'_, P>, shuffle_seed: Option<u64>) -> Result<u64> {
        let Worker {
            index,
            ids,
            edges,
            values,
            halted,
            inbox,
            routes,
            responses,
            out,
            ..
        } = self;

        if let Some(seed) = shuffle_seed {
            let mut rng = ChaCha8Rng::seed_from_u64(
                seed ^ mix64(env.superstep.wrapping_mul(1 << 20) + *index as u64),
            );
            for slot in 0..ids.len() {
                inbox.messages_mut(slot).shuffle(&mut rng);
            }
        }

        let mut active = 0;
        for slot in 0..ids.len() {
            if halted[slot] && inbox.messages(slot).is_empty() {
                continue;
            }
            active += 1;
            let mut msgs = inbox.take(slot);
            let mut ctx = Context {
                env,
                worker: *index,
                id: ids[slot],
                edges: &edges[slot],
                route: routes[slot].as_ref(),
                responses,
                out,
                halted: false,
                requested: Vec::new(),
            };
            env.program.compute(&mut values[slot], &msgs, &mut ctx)?;
            halted[slot] = ctx.halted;
            msgs.clear();
            *inbox.messages_mut(slot) = msgs;
        }
        Ok(active)
    }

    /// Flushes the regular outgoing buffers into one wire batch per
    /// destination and updates the counters.
    pub fn flush_messages(
        &mut self,
        combine: bool,
        program: &P,
        trace: Option<(u64, &mut Vec<FlushTrace<P::Id>>)>,
    ) -> Vec<Vec<(P::Id, P::Message)>> {
        let combiner = if combine { program.combiner() } else { None };
        let buffered: Option<Vec<Vec<P::Id>>> = trace.as_ref().map(|_| {
            let workers = self.out.mirror.len();
            (0..workers)
                .map(|j| self.out.msgs.buffer(j).iter().map(|(t, _)| *t).collect())
                .collect()
        });
        let (batches, merged) = self.out.msgs.flush(combiner);
        self.out.stats.combined_away += merged;
        for (j, b) in batches.iter().enumerate() {
            if j == self.index {
                self.out.stats.msg_local += b.len() as u64;
            } else {
                self.out.stats.msg_wire += b.len() as u64;
            }
        }
        if let (Some((superstep, sink)), Some(buffered)) = (trace, buffered) {
            for (j, targets) in buffered.into_iter().enumerate() {
                sink.push(FlushTrace {
                    superstep,
                    from: self.index,
                    to: j,
                    buffered: targets,
                    wire: batches[j].len() as u64,
                });
            }
        }
        batches
    }

    pub fn take_mirror_batches(&mut self) -> Vec<Vec<(P::Id, P::Message)>> {
        self.out.mirror.iter_mut().map(std::mem::take).collect()
    }

    /// Appends inbound Ch_msg and Ch_mir traffic, source worker by source
    /// worker. `msg_batches[i]` and `mir_batches[i]` come from worker `i`.
    pub fn deliver(
        &mut self,
        program: &P,
        superstep: u64,
        policy: UnknownTargetPolicy,
        msg_batches: Vec<Vec<(P::Id, P::Message)>>,
        mir_batches: Vec<Vec<(P::Id, P::Message)>>,
    ) -> Result<()> {
        for (batch, mirrored) in msg_batches.into_iter().zip(mir_batches) {
            match policy {
                UnknownTargetPolicy::Error => {
                    let n = self.inbox.deliver(batch).map_err(|t| Error::UnknownTarget {
                        target: t.to_string(),
                        superstep,
                    })?;
                    self.out.stats.delivered += n;
                }
                UnknownTargetPolicy::Drop => {
                    let (n, dropped) = self.inbox.deliver_lossy(batch);
                    self.out.stats.delivered += n;
                    self.out.stats.dropped += dropped;
                }
            }
            for (v, msg) in mirrored {
                let list = self.mirrors.get(&v).ok_or_else(|| {
                    Error::Config(format!("worker {} holds no mirror of {v}", self.index))
                })?;
                for (slot, edge) in list {
                    self.inbox.push_slot(*slot, program.relay(edge, &msg));
                }
                self.out.stats.mir_delivered += list.len() as u64;
            }
        }
        Ok(())
    }

    /// Hands out this superstep's request sets and explicit responders.
    pub fn take_requests(&mut self) -> (Vec<BTreeSet<P::Id>>, Vec<BTreeSet<P::Id>>) {
        let sets = self.out.requests.take();
        for (k, s) in sets.iter().enumerate() {
            if k == self.index {
                self.out.stats.req_local += s.len() as u64;
            } else {
                self.out.stats.req_sent += s.len() as u64;
            }
        }
        let explicit = self.out.explicit.iter_mut().map(std::mem::take).collect();
        (sets, explicit)
    }

    /// Builds `R_to_j` for every worker `j` from the received request sets
    /// (`inbound[j]` came from worker `j`) and the local explicit responders.
    /// `respond()` runs at most once per vertex.
    pub fn answer_requests(
        &mut self,
        program: &P,
        inbound: Vec<BTreeSet<P::Id>>,
        explicit: Vec<BTreeSet<P::Id>>,
        served: Option<&mut BTreeMap<P::Id, ServedRequest>>,
    ) -> Result<Vec<BTreeMap<P::Id, P::Response>>> {
        let workers = inbound.len();
        let mut cache: HashMap<usize, P::Response> = HashMap::new();
        let mut sets = ResponseSets::new(workers);
        let mut lookup = |u: &P::Id| -> Result<P::Response> {
            let slot = self
                .inbox
                .slot(u)
                .ok_or_else(|| Error::RespondUndefined(u.to_string()))?;
            if let Some(r) = cache.get(&slot) {
                return Ok(r.clone());
            }
            let r = program
                .respond(*u, &self.values[slot])
                .ok_or_else(|| Error::RespondUndefined(u.to_string()))?;
            cache.insert(slot, r.clone());
            Ok(r)
        };
        for (j, set) in inbound.iter().enumerate() {
            for u in set {
                sets.insert(j, *u, lookup(u)?);
            }
        }
        // explicit entries win over implicit ones for the same vertex
        for (j, set) in explicit.iter().enumerate() {
            for u in set {
                sets.insert(j, *u, lookup(u)?);
            }
        }
        let sets = sets.into_sets();
        for (j, s) in sets.iter().enumerate() {
            if j == self.index {
                self.out.stats.resp_local += s.len() as u64;
            } else {
                self.out.stats.resp_sent += s.len() as u64;
            }
        }
        if let Some(served) = served {
            for (j, set) in inbound.iter().enumerate() {
                if j == self.index {
                    continue;
                }
                for u in set {
                    served.entry(*u).or_default().requests_received += 1;
                }
            }
            for (j, s) in sets.iter().enumerate() {
                if j == self.index {
                    continue;
                }
                for u in s.keys() {
                    served.entry(*u).or_default().responses_sent += 1;
                }
            }
        }
        Ok(sets)
    }

    pub fn install_responses(&mut self, inbound: Vec<BTreeMap<P::Id, P::Response>>) {
        self.responses.clear();
        for set in inbound {
            self.responses.extend(set);
        }
    }

    /// True while this worker still has work for another superstep.
    pub fn has_work(&self) -> bool {
        self.halted.iter().any(|h| !h) || self.inbox.has_pending() || !self.responses.is_empty()
    }

    pub fn take_stats(&mut self) -> WorkerStats {
        std::mem::take(&mut self.out.stats)
    }

    pub fn reset_aggregates(&mut self, identities: Vec<AggregateValue>) -> Vec<AggregateValue> {
        std::mem::replace(&mut self.out.aggregates, identities)
    }
}
