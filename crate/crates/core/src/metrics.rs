//! Aggregate views over run reports: per-worker totals, load imbalance and
//! mirroring-threshold sweeps.

use std::io::Write;

use serde::Serialize;

use crate::engine::{run, Config, VertexProgram};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::mirror::MirrorThreshold;
use crate::report::{RunReport, WorkerStats};

/// Version of the sweep CSV column layout.
pub const SWEEP_SCHEMA_VERSION: u32 = 1;

/// Network messages sent by each worker over the whole run. Sums to
/// [`RunReport::wire_total`].
pub fn per_worker_totals(report: &RunReport) -> Vec<u64> {
    report.worker_totals().iter().map(WorkerStats::wire_total).collect()
}

/// Messages sent by each worker over the whole run, local ones included.
/// A mirrored broadcast counts one message per mirror.
pub fn per_worker_sent(report: &RunReport) -> Vec<u64> {
    report
        .worker_totals()
        .iter()
        .map(|w| w.msg_sent + w.mir_sent + w.mir_local + w.req_sent + w.req_local + w.resp_sent + w.resp_local)
        .collect()
}

/// `(max / mean, coefficient of variation)` using the population standard
/// deviation. An all-zero vector is perfectly balanced.
pub fn imbalance(counts: &[u64]) -> Result<(f64, f64)> {
    if counts.is_empty() {
        return Err(Error::Config("imbalance of an empty vector".into()));
    }
    let n = counts.len() as f64;
    let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / n;
    if mean == 0.0 {
        return Ok((1.0, 0.0));
    }
    let max = counts.iter().copied().max().unwrap_or(0) as f64;
    let var = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / n;
    Ok((max / mean, var.sqrt() / mean))
}

/// One row of a threshold sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub schema_version: u32,
    /// The threshold as given: a number, `inf`, `off` or `auto`.
    pub threshold: String,
    /// Effective τ; empty when mirroring is off.
    pub tau: Option<f64>,
    pub cost_model: bool,
    pub mirrored_vertices: u64,
    pub supersteps: u64,
    pub total_wire: u64,
    pub max_worker_wire: u64,
    pub total_sent: u64,
    pub max_worker_sent: u64,
    pub max_mean_ratio: f64,
    pub cv: f64,
}

/// Runs `program` once per threshold, everything else taken from `base`.
pub fn sweep_thresholds<P: VertexProgram>(
    graph: &Graph<P::Id>,
    program: &P,
    base: &Config,
    thresholds: &[MirrorThreshold],
) -> Result<Vec<SweepRow>> {
    thresholds
        .iter()
        .map(|t| {
            let cfg = Config {
                mirror: *t,
                ..base.clone()
            };
            let out = run(graph, program, &cfg)?;
            Ok(sweep_row(*t, &out.report))
        })
        .collect()
}

/// Summarizes one run as a sweep row.
pub fn sweep_row(threshold: MirrorThreshold, report: &RunReport) -> SweepRow {
    let wire = per_worker_totals(report);
    let sent = per_worker_sent(report);
    let (ratio, cv) = imbalance(&sent).unwrap_or((1.0, 0.0));
    SweepRow {
        schema_version: SWEEP_SCHEMA_VERSION,
        threshold: threshold.to_string(),
        tau: report.mirror.threshold,
        cost_model: threshold == MirrorThreshold::CostModel,
        mirrored_vertices: report.mirror.mirrored_vertices,
        supersteps: report.supersteps,
        total_wire: wire.iter().sum(),
        max_worker_wire: wire.iter().copied().max().unwrap_or(0),
        total_sent: sent.iter().sum(),
        max_worker_sent: sent.iter().copied().max().unwrap_or(0),
        max_mean_ratio: ratio,
        cv,
    }
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-4
    }

    #[test]
    fn imbalance_examples() {
        assert_eq!(imbalance(&[10, 10, 10, 10]).unwrap(), (1.0, 0.0));
        let (r, cv) = imbalance(&[30, 10, 10, 10]).unwrap();
        assert!(close(r, 2.0) && close(cv, 0.57735), "{r} {cv}");
        assert!(imbalance(&[]).is_err());
        assert_eq!(imbalance(&[0, 0]).unwrap(), (1.0, 0.0));
    }

    #[test]
    fn csv_has_header_and_schema_version() {
        let row = sweep_row(MirrorThreshold::CostModel, &RunReport::new(2, 0, true, Default::default()));
        let mut buf = Vec::new();
        write_sweep_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("schema_version,threshold,tau,cost_model"));
        assert!(lines.next().unwrap().starts_with("1,auto,,true"));
    }
}
