//! Graph representation, vertex identity and hash partitioning.
//!
//! Vertices are keyed by an opaque [`VertexId`]. Two id kinds ship with the
//! crate: plain `u64` and [`PairId`], an ordered pair of `u64`s. Each id
//! exposes a stable 64-bit hash that the [`Partitioner`] reduces modulo the
//! worker count.
//!
//! Edge lists are whitespace separated text, one `src dst [weight]` edge per
//! line. Lines starting with `#` are comments. Pair ids are written `a:b`.

use std::collections::{BTreeMap, HashSet};
use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Identifier of a vertex.
///
/// `worker_hash` must be a pure function of the id; the partitioner relies on
/// it being identical on every call and every worker.
pub trait VertexId:
    Copy + Eq + Ord + Hash + Debug + Display + FromStr + Send + Sync + 'static
{
    fn worker_hash(&self) -> u64;
}

impl VertexId for u64 {
    #[inline]
    fn worker_hash(&self) -> u64 {
        *self
    }
}

/// A vertex id made of two integers, e.g. an edge `(u, v)` of another graph.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PairId(pub u64, pub u64);

impl VertexId for PairId {
    #[inline]
    fn worker_hash(&self) -> u64 {
        mix64(mix64(self.0) ^ self.1.rotate_left(32))
    }
}

impl Display for PairId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.0, self.1)
    }
}

impl FromStr for PairId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| format!("expected `a:b`, got `{s}`"))?;
        let a = a.parse().map_err(|e| format!("bad pair component `{a}`: {e}"))?;
        let b = b.parse().map_err(|e| format!("bad pair component `{b}`: {e}"))?;
        Ok(PairId(a, b))
    }
}

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// An out-edge. `weight` is present iff the graph was loaded as weighted.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge<I> {
    pub target: I,
    pub weight: Option<f64>,
}

impl<I> Edge<I> {
    pub fn new(target: I) -> Self {
        Edge {
            target,
            weight: None,
        }
    }

    pub fn weighted(target: I, weight: f64) -> Self {
        Edge {
            target,
            weight: Some(weight),
        }
    }
}

/// Assigns every vertex to one of `workers` workers by `hash(id) mod workers`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Partitioner {
    workers: usize,
}

impl Partitioner {
    pub fn new(workers: usize) -> Result<Self> {
        if workers == 0 {
            return Err(Error::Config("worker count must be at least 1".into()));
        }
        Ok(Partitioner { workers })
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    #[inline]
    pub fn worker_of<I: VertexId>(&self, id: &I) -> usize {
        (id.worker_hash() % self.workers as u64) as usize
    }
}

/// Convenience wrapper over [`Partitioner::worker_of`].
pub fn partition<I: VertexId>(id: &I, workers: usize) -> Result<usize> {
    Ok(Partitioner::new(workers)?.worker_of(id))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegreeStats {
    pub vertices: usize,
    /// Directed adjacency entries; an undirected edge counts twice.
    pub edges: usize,
    pub avg_degree: f64,
    pub max_degree: usize,
}

/// Vertex set with ordered adjacency lists.
///
/// Vertices iterate in ascending id order. Each adjacency list keeps the
/// order in which edges were added.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph<I: VertexId> {
    directed: bool,
    weighted: bool,
    adjacency: BTreeMap<I, Vec<Edge<I>>>,
}

impl<I: VertexId> Graph<I> {
    pub fn new(directed: bool, weighted: bool) -> Self {
        Graph {
            directed,
            weighted,
            adjacency: BTreeMap::new(),
        }
    }

    /// Builds a graph from `(src, dst, weight)` triples.
    pub fn from_edges(
        directed: bool,
        weighted: bool,
        edges: impl IntoIterator<Item = (I, I, Option<f64>)>,
    ) -> Self {
        let mut g = Graph::new(directed, weighted);
        for (s, t, w) in edges {
            g.add_edge(s, t, w);
        }
        g
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn add_vertex(&mut self, id: I) {
        self.adjacency.entry(id).or_default();
    }

    /// Adds `src -> dst`, and `dst -> src` as well for undirected graphs.
    /// A self-loop is stored once.
    pub fn add_edge(&mut self, src: I, dst: I, weight: Option<f64>) {
        self.adjacency
            .entry(src)
            .or_default()
            .push(Edge { target: dst, weight });
        let back = self.adjacency.entry(dst).or_default();
        if !self.directed && src != dst {
            back.push(Edge { target: src, weight });
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn num_adjacency_entries(&self) -> usize {
        self.adjacency.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn contains(&self, id: &I) -> bool {
        self.adjacency.contains_key(id)
    }

    pub fn edges(&self, id: &I) -> Option<&[Edge<I>]> {
        self.adjacency.get(id).map(Vec::as_slice)
    }

    pub fn degree(&self, id: &I) -> usize {
        self.adjacency.get(id).map_or(0, Vec::len)
    }

    pub fn vertices(&self) -> impl Iterator<Item = (&I, &[Edge<I>])> + '_ {
        self.adjacency.iter().map(|(id, e)| (id, e.as_slice()))
    }

    pub fn ids(&self) -> impl Iterator<Item = I> + '_ {
        self.adjacency.keys().copied()
    }

    pub fn degree_stats(&self) -> Result<DegreeStats> {
        let n = self.num_vertices();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let m = self.num_adjacency_entries();
        let max = self.adjacency.values().map(Vec::len).max().unwrap_or(0);
        Ok(DegreeStats {
            vertices: n,
            edges: m,
            avg_degree: m as f64 / n as f64,
            max_degree: max,
        })
    }

    /// Writes the graph as an edge list. Undirected edges are written once,
    /// from the endpoint that comes first in id order.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> Result<()> {
        let targets: HashSet<I> = self
            .adjacency
            .values()
            .flat_map(|edges| edges.iter().map(|e| e.target))
            .collect();
        for (src, edges) in &self.adjacency {
            if edges.is_empty() && !targets.contains(src) {
                writeln!(out, "# isolated {src}")?;
            }
            for e in edges {
                if !self.directed && e.target < *src {
                    continue;
                }
                match e.weight {
                    Some(w) => writeln!(out, "{src} {} {w}", e.target)?,
                    None => writeln!(out, "{src} {}", e.target)?,
                }
            }
        }
        Ok(())
    }
}

/// Parses an edge list from a reader. See the module docs for the format.
///
/// Isolated vertices can be declared with an `# isolated <id>` comment, which
/// is what [`Graph::write_edge_list`] emits for them.
pub fn parse_edge_list<I: VertexId, R: BufRead>(
    reader: R,
    directed: bool,
    weighted: bool,
) -> Result<Graph<I>>
where
    <I as FromStr>::Err: Display,
{
    let mut graph = Graph::new(directed, weighted);
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(id) = comment.trim().strip_prefix("isolated ") {
                let id = parse_id::<I>(id.trim(), lineno)?;
                graph.add_vertex(id);
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let weight = match (fields.len(), weighted) {
            (2, false) => None,
            (3, true) => {
                let w: f64 = fields[2].parse().map_err(|e| Error::Parse {
                    line: lineno,
                    reason: format!("bad weight `{}`: {e}", fields[2]),
                })?;
                if !w.is_finite() {
                    return Err(Error::Parse {
                        line: lineno,
                        reason: format!("weight `{}` is not finite", fields[2]),
                    });
                }
                Some(w)
            }
            (3, false) => {
                return Err(Error::Parse {
                    line: lineno,
                    reason: "weight given but graph is unweighted".into(),
                })
            }
            (2, true) => {
                return Err(Error::Parse {
                    line: lineno,
                    reason: "missing weight".into(),
                })
            }
            (k, _) => {
                return Err(Error::Parse {
                    line: lineno,
                    reason: format!("expected `src dst [weight]`, found {k} fields"),
                })
            }
        };
        let src = parse_id::<I>(fields[0], lineno)?;
        let dst = parse_id::<I>(fields[1], lineno)?;
        graph.add_edge(src, dst, weight);
    }
    Ok(graph)
}

fn parse_id<I: VertexId>(tok: &str, line: usize) -> Result<I>
where
    <I as FromStr>::Err: Display,
{
    tok.parse().map_err(|e| Error::Parse {
        line,
        reason: format!("bad vertex id `{tok}`: {e}"),
    })
}

pub fn load_edge_list<I: VertexId>(
    path: impl AsRef<Path>,
    directed: bool,
    weighted: bool,
) -> Result<Graph<I>>
where
    <I as FromStr>::Err: Display,
{
    let file = std::fs::File::open(path)?;
    parse_edge_list(BufReader::new(file), directed, weighted)
}
