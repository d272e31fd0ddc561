//! Per-superstep, per-worker message counters and the JSON run report.

use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

use crate::mirror::MirrorBuildStats;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Counters of one worker for one superstep.
///
/// "wire" counts cross-worker traffic; "local" counts traffic a worker
/// addresses to itself. `msg_sent` counts every `send_msg`, so
/// `msg_sent = combined_away + msg_wire + msg_local`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkerStats {
    pub msg_sent: u64,
    pub msg_wire: u64,
    pub msg_local: u64,
    pub combined_away: u64,
    pub mir_sent: u64,
    pub mir_local: u64,
    pub req_sent: u64,
    pub req_local: u64,
    pub resp_sent: u64,
    pub resp_local: u64,
    /// Ch_msg payloads appended to incoming buffers on this worker.
    pub delivered: u64,
    /// Payloads forwarded by mirrors into incoming buffers on this worker.
    pub mir_delivered: u64,
    pub dropped: u64,
}

impl WorkerStats {
    /// Messages this worker put on the network.
    pub fn wire_total(&self) -> u64 {
        self.msg_wire + self.mir_sent + self.req_sent + self.resp_sent
    }
}

impl AddAssign<&WorkerStats> for WorkerStats {
    fn add_assign(&mut self, o: &WorkerStats) {
        self.msg_sent += o.msg_sent;
        self.msg_wire += o.msg_wire;
        self.msg_local += o.msg_local;
        self.combined_away += o.combined_away;
        self.mir_sent += o.mir_sent;
        self.mir_local += o.mir_local;
        self.req_sent += o.req_sent;
        self.req_local += o.req_local;
        self.resp_sent += o.resp_sent;
        self.resp_local += o.resp_local;
        self.delivered += o.delivered;
        self.mir_delivered += o.mir_delivered;
        self.dropped += o.dropped;
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SuperstepStats {
    pub superstep: u64,
    pub active_vertices: u64,
    pub workers: Vec<WorkerStats>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub workers: usize,
    pub vertices: usize,
    pub combiner: bool,
    pub supersteps: u64,
    pub mirror: MirrorBuildStats,
    pub steps: Vec<SuperstepStats>,
}

impl RunReport {
    pub fn new(workers: usize, vertices: usize, combiner: bool, mirror: MirrorBuildStats) -> Self {
        RunReport {
            schema_version: REPORT_SCHEMA_VERSION,
            workers,
            vertices,
            combiner,
            supersteps: 0,
            mirror,
            steps: Vec::new(),
        }
    }

    /// Sum over every superstep and worker.
    pub fn totals(&self) -> WorkerStats {
        let mut t = WorkerStats::default();
        for s in &self.steps {
            for w in &s.workers {
                t += w;
            }
        }
        t
    }

    /// Per-worker sums over all supersteps.
    pub fn worker_totals(&self) -> Vec<WorkerStats> {
        let mut out = vec![WorkerStats::default(); self.workers];
        for s in &self.steps {
            for (acc, w) in out.iter_mut().zip(&s.workers) {
                *acc += w;
            }
        }
        out
    }

    pub fn wire_total(&self) -> u64 {
        self.totals().wire_total()
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}
