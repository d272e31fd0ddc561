//! Vertex mirroring for high-degree vertices.
//!
//! A vertex whose out-degree reaches the threshold τ gets a mirror on every
//! worker that owns at least one of its neighbors. The mirror keeps the local
//! slice of the adjacency list, edge fields included. Broadcasting from such
//! a vertex ships one message per mirror instead of one per neighbor, and the
//! mirror fans it out locally, applying `relay` per edge on the receiving
//! side.
//!
//! The home worker always keeps the list of its own local neighbors of a
//! mirrored vertex as well, so local fan-out follows the same path without a
//! wire message.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Partitioner, VertexId};

/// How τ is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum MirrorThreshold {
    /// No mirroring (τ = ∞).
    #[default]
    Off,
    Fixed(f64),
    /// τ = M · exp(deg_avg / M), evaluated on the loaded graph.
    CostModel,
}

impl MirrorThreshold {
    /// The effective τ for `graph` on `workers` workers; `None` when off.
    pub fn resolve<I: VertexId>(&self, graph: &Graph<I>, workers: usize) -> Result<Option<f64>> {
        match *self {
            MirrorThreshold::Off => Ok(None),
            MirrorThreshold::Fixed(t) if t.is_infinite() && t > 0.0 => Ok(None),
            MirrorThreshold::Fixed(t) => {
                if t.is_nan() || t < 0.0 {
                    return Err(Error::Config(format!("mirror threshold {t} must be >= 0")));
                }
                Ok(Some(t))
            }
            MirrorThreshold::CostModel => {
                let avg = if graph.is_empty() {
                    0.0
                } else {
                    graph.degree_stats()?.avg_degree
                };
                Ok(Some(compute_threshold(workers, avg)))
            }
        }
    }
}

impl fmt::Display for MirrorThreshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MirrorThreshold::Off => f.write_str("off"),
            MirrorThreshold::Fixed(t) if t.is_infinite() => f.write_str("inf"),
            MirrorThreshold::Fixed(t) => write!(f, "{t}"),
            MirrorThreshold::CostModel => f.write_str("auto"),
        }
    }
}

impl FromStr for MirrorThreshold {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "off" | "none" => Ok(MirrorThreshold::Off),
            "inf" | "infinity" | "∞" => Ok(MirrorThreshold::Fixed(f64::INFINITY)),
            "auto" => Ok(MirrorThreshold::CostModel),
            other => {
                let t: f64 = other
                    .parse()
                    .map_err(|_| format!("expected a number, `auto`, `inf` or `off`, got `{s}`"))?;
                if t.is_nan() || t < 0.0 {
                    return Err(format!("mirror threshold must be >= 0, got {t}"));
                }
                Ok(MirrorThreshold::Fixed(t))
            }
        }
    }
}

/// The degree above which mirroring a vertex is expected to save messages
/// even with a combiner on the regular channel: `M · exp(deg_avg / M)`.
pub fn compute_threshold(workers: usize, avg_degree: f64) -> f64 {
    let m = workers as f64;
    m * (avg_degree / m).exp()
}

/// Mirrors resident on one worker: mirrored vertex -> local out-edges.
#[derive(Clone, Debug)]
pub struct MirrorTable<I> {
    entries: HashMap<I, Vec<Edge<I>>>,
}

impl<I> Default for MirrorTable<I> {
    fn default() -> Self {
        MirrorTable {
            entries: HashMap::new(),
        }
    }
}

impl<I: VertexId> MirrorTable<I> {
    pub fn get(&self, v: &I) -> Option<&[Edge<I>]> {
        self.entries.get(v).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&I, &[Edge<I>])> {
        self.entries.iter().map(|(v, e)| (v, e.as_slice()))
    }
}

/// Cost of building the mirrors, reported apart from algorithm traffic.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MirrorBuildStats {
    pub threshold: Option<f64>,
    pub mirrored_vertices: u64,
    /// `⟨v; N_i⟩` messages shipped to remote workers.
    pub construction_messages: u64,
    /// Neighbor ids carried by those messages.
    pub construction_entries: u64,
}

/// Every mirror in the system.
#[derive(Clone, Debug)]
pub struct MirrorSet<I> {
    threshold: Option<f64>,
    tables: Vec<MirrorTable<I>>,
    /// Home-side routing: mirrored vertex -> remote workers holding a mirror.
    routes: BTreeMap<I, Vec<usize>>,
    stats: MirrorBuildStats,
}

impl<I: VertexId> MirrorSet<I> {
    pub fn empty(workers: usize) -> Self {
        MirrorSet {
            threshold: None,
            tables: (0..workers).map(|_| MirrorTable::default()).collect(),
            routes: BTreeMap::new(),
            stats: MirrorBuildStats::default(),
        }
    }

    pub fn threshold(&self) -> Option<f64> {
        self.threshold
    }

    pub fn table(&self, worker: usize) -> &MirrorTable<I> {
        &self.tables[worker]
    }

    pub fn is_mirrored(&self, v: &I) -> bool {
        self.routes.contains_key(v)
    }

    /// Remote workers holding a mirror of `v`, ascending.
    pub fn mirror_workers(&self, v: &I) -> Option<&[usize]> {
        self.routes.get(v).map(Vec::as_slice)
    }

    pub fn mirrored(&self) -> impl Iterator<Item = &I> {
        self.routes.keys()
    }

    pub fn stats(&self) -> &MirrorBuildStats {
        &self.stats
    }

    pub(crate) fn into_parts(self) -> (Vec<MirrorTable<I>>, BTreeMap<I, Vec<usize>>) {
        (self.tables, self.routes)
    }
}

/// Builds mirrors for every vertex with out-degree at least `threshold`.
/// `None` disables mirroring.
pub fn build_mirrors<I: VertexId>(
    graph: &Graph<I>,
    threshold: Option<f64>,
    partitioner: &Partitioner,
) -> Result<MirrorSet<I>> {
    let workers = partitioner.workers();
    let mut set = MirrorSet::empty(workers);
    let Some(tau) = threshold else {
        return Ok(set);
    };
    if tau.is_nan() || tau < 0.0 {
        return Err(Error::Config(format!("mirror threshold {tau} must be >= 0")));
    }
    set.threshold = Some(tau);
    set.stats.threshold = Some(tau);

    for (v, edges) in graph.vertices() {
        if (edges.len() as f64) < tau {
            continue;
        }
        let home = partitioner.worker_of(v);
        let mut groups: BTreeMap<usize, Vec<Edge<I>>> = BTreeMap::new();
        for e in edges {
            groups.entry(partitioner.worker_of(&e.target)).or_default().push(*e);
        }
        let mut remote = Vec::new();
        for (w, local) in groups {
            if w != home {
                remote.push(w);
                set.stats.construction_messages += 1;
                set.stats.construction_entries += local.len() as u64;
            }
            set.tables[w].entries.insert(*v, local);
        }
        set.stats.mirrored_vertices += 1;
        set.routes.insert(*v, remote);
    }
    Ok(set)
}

/// Checks the per-broadcast bound `sends <= min(M, d(v))`.
pub fn per_vertex_send_bound_check(wire_sends: u64, degree: usize, workers: usize) -> bool {
    wire_sends <= workers.min(degree) as u64
}
