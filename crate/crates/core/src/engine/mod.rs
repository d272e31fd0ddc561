//! The superstep loop.
//!
//! Each superstep runs `compute()` on every active vertex of every worker in
//! parallel, then performs the barrier exchange in a fixed order:
//!
//! 1. Ch_msg buffers are flushed (combined when enabled) and Ch_mir
//!    broadcasts are shipped; both are delivered source worker by source
//!    worker, Ch_msg batch first.
//! 2. Request sets are exchanged and answered; the answers become the
//!    response tables readable in the next superstep.
//! 3. Aggregator partials are merged in worker order.
//!
//! The run ends when no vertex is active, no message is pending and no
//! response table is populated.

pub mod aggregate;
mod context;
mod worker;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

pub use aggregate::{AggregateOp, AggregateValue, Aggregator};
pub use context::Context;

use crate::channel::Combiner;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Partitioner, VertexId};
use crate::mirror::{build_mirrors, MirrorThreshold};
use crate::report::{RunReport, SuperstepStats};
use aggregate::AggregatorRegistry;
use worker::{ServedRequest, Worker};

/// A vertex-centric algorithm.
pub trait VertexProgram: Sync + Sized {
    type Id: VertexId;
    type Value: Clone + Send + Sync;
    type Message: Clone + Send + Sync;
    /// Value handed out by [`respond`](Self::respond).
    type Response: Clone + Send + Sync;

    fn init(&self, id: Self::Id, edges: &[Edge<Self::Id>]) -> Self::Value;

    /// Called once per superstep for every active vertex, and for halted
    /// vertices that received messages. Vertices run in ascending id order
    /// within a worker.
    fn compute(
        &self,
        value: &mut Self::Value,
        messages: &[Self::Message],
        ctx: &mut Context<'_, Self>,
    ) -> Result<()>;

    /// Must be commutative and associative.
    fn combiner(&self) -> Option<Combiner<Self::Message>> {
        None
    }

    /// Value served to requesters. Must depend only on `value`.
    fn respond(&self, _id: Self::Id, _value: &Self::Value) -> Option<Self::Response> {
        None
    }

    /// Per-edge message transform used by `send_along` and `broadcast`.
    fn relay(&self, _edge: &Edge<Self::Id>, msg: &Self::Message) -> Self::Message {
        msg.clone()
    }

    fn aggregators(&self) -> Vec<Aggregator> {
        Vec::new()
    }
}

/// What to do with a message addressed to a vertex that does not exist.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum UnknownTargetPolicy {
    #[default]
    Error,
    Drop,
}

/// Optional per-event instrumentation. Everything is off by default.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TraceConfig {
    pub broadcasts: bool,
    pub requests: bool,
    pub buffers: bool,
}

#[derive(Clone, Debug)]
pub struct Config {
    pub workers: usize,
    pub mirror: MirrorThreshold,
    /// Apply the program's combiner, if it has one.
    pub combiner: bool,
    pub max_supersteps: u64,
    pub unknown_target: UnknownTargetPolicy,
    pub trace: TraceConfig,
    /// Shuffles every incoming buffer before compute.
    pub shuffle_seed: Option<u64>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            workers: 4,
            mirror: MirrorThreshold::Off,
            combiner: true,
            max_supersteps: 10_000,
            unknown_target: UnknownTargetPolicy::Error,
            trace: TraceConfig::default(),
            shuffle_seed: None,
        }
    }
}

impl Config {
    pub fn with_workers(workers: usize) -> Self {
        Config {
            workers,
            ..Config::default()
        }
    }
}

/// One `broadcast` call.
#[derive(Clone, Debug, PartialEq)]
pub struct BroadcastTrace<I> {
    pub superstep: u64,
    pub vertex: I,
    pub degree: usize,
    pub mirrored: bool,
    /// Cross-worker messages the call produced.
    pub wire_sends: u64,
}

/// Request traffic concerning one requested vertex in one superstep.
#[derive(Clone, Debug, PartialEq)]
pub struct RequestTrace<I> {
    pub superstep: u64,
    pub vertex: I,
    /// Distinct vertices that requested it, on any worker.
    pub requesters: u64,
    /// Request sets from remote workers that contained it.
    pub requests_received: u64,
    /// Remote response entries carrying its value.
    pub responses_sent: u64,
}

/// Contents of one outgoing buffer at flush time.
#[derive(Clone, Debug, PartialEq)]
pub struct FlushTrace<I> {
    pub superstep: u64,
    pub from: usize,
    pub to: usize,
    /// Targets in buffer order, before combining.
    pub buffered: Vec<I>,
    /// Entries in the wire batch.
    pub wire: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trace<I> {
    pub broadcasts: Vec<BroadcastTrace<I>>,
    pub requests: Vec<RequestTrace<I>>,
    pub flushes: Vec<FlushTrace<I>>,
}

impl<I> Default for Trace<I> {
    fn default() -> Self {
        Trace {
            broadcasts: Vec::new(),
            requests: Vec::new(),
            flushes: Vec::new(),
        }
    }
}

pub struct RunOutput<P: VertexProgram> {
    pub values: BTreeMap<P::Id, P::Value>,
    pub report: RunReport,
    pub trace: Trace<P::Id>,
}

impl<P: VertexProgram> std::fmt::Debug for RunOutput<P>
where
    P::Value: std::fmt::Debug,
{
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RunOutput")
            .field("values", &self.values)
            .field("report", &self.report)
            .finish()
    }
}

/// Read-only state shared by all workers during one compute phase.
pub(crate) struct Env<'a, P: VertexProgram> {
    pub program: &'a P,
    pub partitioner: Partitioner,
    pub superstep: u64,
    pub num_vertices: usize,
    pub aggregates: &'a [AggregateValue],
    pub registry: &'a AggregatorRegistry,
    pub trace: TraceConfig,
}

type Batches<I, M> = Vec<Vec<(I, M)>>;

/// Takes the first error in worker order.
fn first_error<T>(results: Vec<Result<T>>) -> Result<Vec<T>> {
    results.into_iter().collect()
}

/// `out[j][i] = rows[i][j]`.
fn transpose<T>(rows: Vec<Vec<T>>, m: usize) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = (0..m).map(|_| Vec::with_capacity(rows.len())).collect();
    for row in rows {
        for (j, cell) in row.into_iter().enumerate() {
            out[j].push(cell);
        }
    }
    out
}

/// Runs `program` on `graph` until global termination.
pub fn run<P: VertexProgram>(
    graph: &Graph<P::Id>,
    program: &P,
    config: &Config,
) -> Result<RunOutput<P>> {
    let partitioner = Partitioner::new(config.workers)?;
    let m = config.workers;
    let registry = AggregatorRegistry::new(program.aggregators())?;
    let combine = config.combiner && program.combiner().is_some();

    if graph.is_empty() {
        let report = RunReport::new(m, 0, combine, Default::default());
        return Ok(RunOutput {
            values: BTreeMap::new(),
            report,
            trace: Trace::default(),
        });
    }

    let threshold = config.mirror.resolve(graph, m)?;
    let mirrors = build_mirrors(graph, threshold, &partitioner)?;
    let mut report = RunReport::new(m, graph.num_vertices(), combine, mirrors.stats().clone());

    let mut slices: Vec<Vec<(P::Id, Vec<Edge<P::Id>>)>> = (0..m).map(|_| Vec::new()).collect();
    for (id, edges) in graph.vertices() {
        slices[partitioner.worker_of(id)].push((*id, edges.to_vec()));
    }
    let mut workers: Vec<Worker<P>> = slices
        .into_par_iter()
        .enumerate()
        .map(|(w, vs)| Worker::new(w, m, vs, program, registry.identities()))
        .collect();

    let (tables, routes) = mirrors.into_parts();
    for (v, remote) in routes {
        let home = partitioner.worker_of(&v);
        let local = tables[home].get(&v).is_some();
        workers[home].install_route(&v, remote, local);
    }
    for (w, table) in tables.iter().enumerate() {
        for (v, edges) in table.iter() {
            workers[w].install_mirror(*v, edges);
        }
    }
    drop(tables);

    let trace_cfg = config.trace;
    let mut trace = Trace::default();
    let mut aggregates = registry.identities();
    let mut superstep = 0u64;

    loop {
        superstep += 1;
        if superstep > config.max_supersteps {
            return Err(Error::SuperstepLimit {
                limit: config.max_supersteps,
                report: Box::new(report),
            });
        }

        let env = Env {
            program,
            partitioner,
            superstep,
            num_vertices: graph.num_vertices(),
            aggregates: &aggregates,
            registry: &registry,
            trace: trace_cfg,
        };
        let active: u64 = first_error(
            workers
                .par_iter_mut()
                .map(|w| w.compute(&env, config.shuffle_seed))
                .collect(),
        )?
        .into_iter()
        .sum();
        if trace_cfg.broadcasts {
            for w in &mut workers {
                trace.broadcasts.append(&mut w.out.broadcasts);
            }
        }

        // Ch_msg and Ch_mir
        let flushed: Vec<(Batches<P::Id, P::Message>, Batches<P::Id, P::Message>, Vec<_>)> =
            workers
                .par_iter_mut()
                .map(|w| {
                    let mut ft = Vec::new();
                    let sink = trace_cfg.buffers.then_some((superstep, &mut ft));
                    let msgs = w.flush_messages(config.combiner, program, sink);
                    (msgs, w.take_mirror_batches(), ft)
                })
                .collect();
        let mut msg_rows = Vec::with_capacity(m);
        let mut mir_rows = Vec::with_capacity(m);
        for (msgs, mir, mut ft) in flushed {
            msg_rows.push(msgs);
            mir_rows.push(mir);
            trace.flushes.append(&mut ft);
        }
        let msg_in = transpose(msg_rows, m);
        let mir_in = transpose(mir_rows, m);
        first_error(
            workers
                .par_iter_mut()
                .zip(msg_in.into_par_iter().zip(mir_in))
                .map(|(w, (msgs, mir))| {
                    w.deliver(program, superstep, config.unknown_target, msgs, mir)
                })
                .collect(),
        )?;

        // Ch_req
        let mut req_rows = Vec::with_capacity(m);
        let mut explicit = Vec::with_capacity(m);
        let mut requesters: BTreeMap<P::Id, u64> = BTreeMap::new();
        for w in &mut workers {
            let (sets, expl) = w.take_requests();
            req_rows.push(sets);
            explicit.push(expl);
            if trace_cfg.requests {
                for (u, c) in std::mem::take(&mut w.out.requesters) {
                    *requesters.entry(u).or_insert(0) += c;
                }
            }
        }
        let req_in: Vec<Vec<BTreeSet<P::Id>>> = transpose(req_rows, m);
        let answered: Vec<_> = workers
            .par_iter_mut()
            .zip(req_in.into_par_iter().zip(explicit))
            .map(|(w, (inbound, expl))| {
                let mut served = BTreeMap::new();
                let sets =
                    w.answer_requests(program, inbound, expl, trace_cfg.requests.then_some(&mut served));
                sets.map(|s| (s, served))
            })
            .collect();
        let mut resp_rows = Vec::with_capacity(m);
        let mut served_all: BTreeMap<P::Id, ServedRequest> = BTreeMap::new();
        for (sets, served) in first_error(answered)? {
            resp_rows.push(sets);
            served_all.extend(served);
        }
        if trace_cfg.requests {
            for (u, ell) in &requesters {
                let s = served_all.remove(u).unwrap_or_default();
                trace.requests.push(RequestTrace {
                    superstep,
                    vertex: *u,
                    requesters: *ell,
                    requests_received: s.requests_received,
                    responses_sent: s.responses_sent,
                });
            }
            // explicit responses with no matching request
            for (u, s) in served_all {
                trace.requests.push(RequestTrace {
                    superstep,
                    vertex: u,
                    requesters: 0,
                    requests_received: s.requests_received,
                    responses_sent: s.responses_sent,
                });
            }
        }
        let resp_in = transpose(resp_rows, m);
        workers
            .par_iter_mut()
            .zip(resp_in)
            .for_each(|(w, inbound)| w.install_responses(inbound));

        // aggregators
        let partials: Vec<Vec<AggregateValue>> = workers
            .iter_mut()
            .map(|w| w.reset_aggregates(registry.identities()))
            .collect();
        aggregates = registry.merge_workers(partials.iter().map(Vec::as_slice));

        report.steps.push(SuperstepStats {
            superstep,
            active_vertices: active,
            workers: workers.iter_mut().map(|w| w.take_stats()).collect(),
        });
        report.supersteps = superstep;
        log::debug!("superstep {superstep}: {active} active");

        if !workers.iter().any(|w| w.has_work()) {
            break;
        }
    }

    let mut values = BTreeMap::new();
    for w in workers {
        values.extend(w.ids.into_iter().zip(w.values));
    }
    Ok(RunOutput {
        values,
        report,
        trace,
    })
}
