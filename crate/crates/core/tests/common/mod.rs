//! Single-process reference implementations used as test oracles.

#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use pregelkit::algorithms::attribute_of;
use pregelkit::algorithms::msf::MsfEdge;
use pregelkit::Graph;

pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = x;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

fn index(g: &Graph<u64>) -> (Vec<u64>, HashMap<u64, usize>) {
    let ids: Vec<u64> = g.ids().collect();
    let pos = ids.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    (ids, pos)
}

/// Smallest id of each vertex's component.
pub fn components(g: &Graph<u64>) -> BTreeMap<u64, u64> {
    let (ids, pos) = index(g);
    let mut uf = UnionFind::new(ids.len());
    for (v, edges) in g.vertices() {
        for e in edges {
            uf.union(pos[v], pos[&e.target]);
        }
    }
    let mut min_of_root: HashMap<usize, u64> = HashMap::new();
    for (i, v) in ids.iter().enumerate() {
        let r = uf.find(i);
        let m = min_of_root.entry(r).or_insert(*v);
        *m = (*m).min(*v);
    }
    ids.iter()
        .enumerate()
        .map(|(i, v)| (*v, min_of_root[&uf.find(i)]))
        .collect()
}

/// Shortest distances; edges without weight have length 1.
pub fn dijkstra(g: &Graph<u64>, source: u64) -> BTreeMap<u64, Option<f64>> {
    let mut dist: BTreeMap<u64, Option<f64>> = g.ids().map(|v| (v, None)).collect();
    let mut heap = BinaryHeap::new();
    dist.insert(source, Some(0.0));
    heap.push(Reverse((ordered(0.0), source)));
    while let Some(Reverse((d, v))) = heap.pop() {
        let d = f64::from_bits(d);
        if dist[&v].is_some_and(|best| d > best) {
            continue;
        }
        for e in g.edges(&v).unwrap() {
            let nd = d + e.weight.unwrap_or(1.0);
            if dist[&e.target].is_none_or(|cur| nd < cur) {
                dist.insert(e.target, Some(nd));
                heap.push(Reverse((ordered(nd), e.target)));
            }
        }
    }
    dist
}

/// Bit pattern that orders like the value for non-negative floats.
fn ordered(x: f64) -> u64 {
    x.to_bits()
}

/// Minimum spanning forest under the `(weight, lo, hi)` rank.
pub fn kruskal(g: &Graph<u64>) -> Vec<MsfEdge<u64>> {
    let (ids, pos) = index(g);
    let mut edges: Vec<MsfEdge<u64>> = Vec::new();
    for (v, es) in g.vertices() {
        for e in es {
            if *v < e.target {
                edges.push(MsfEdge::new(*v, e.target, e.weight.unwrap_or(1.0)));
            }
        }
    }
    edges.sort();
    let mut uf = UnionFind::new(ids.len());
    edges
        .into_iter()
        .filter(|e| uf.union(pos[&e.lo], pos[&e.hi]))
        .collect()
}

pub fn forest_weight(f: &[MsfEdge<u64>]) -> f64 {
    f.iter().map(|e| e.weight).sum()
}

pub fn is_forest(f: &[MsfEdge<u64>], g: &Graph<u64>) -> bool {
    let (ids, pos) = index(g);
    let mut uf = UnionFind::new(ids.len());
    f.iter().all(|e| uf.union(pos[&e.lo], pos[&e.hi]))
}

/// The PageRank recurrence, evaluated in one process with plain `f64`.
/// Returns the values and the superstep count the engine should report.
pub fn pagerank(g: &Graph<u64>, epsilon: f64) -> (BTreeMap<u64, f64>, u64) {
    let n = g.num_vertices() as f64;
    let (ids, pos) = index(g);
    let mut pr = vec![1.0 / n; ids.len()];
    let mut t = 0u64;
    loop {
        t += 1;
        let mut sum = vec![0.0; ids.len()];
        for (v, es) in g.vertices() {
            if es.is_empty() {
                continue;
            }
            let share = pr[pos[v]] / es.len() as f64;
            for e in es {
                sum[pos[&e.target]] += share;
            }
        }
        let next: Vec<f64> = sum.iter().map(|s| 0.15 / n + 0.85 * s).collect();
        let converged = next.iter().zip(&pr).all(|(a, b)| (a - b).abs() < epsilon);
        pr = next;
        if converged {
            break;
        }
    }
    (ids.into_iter().zip(pr).collect(), t + 2)
}

/// `v -> [(u, a(u))]` over out-edges in adjacency order.
pub fn decorated(g: &Graph<u64>) -> BTreeMap<u64, Vec<(u64, u32)>> {
    g.vertices()
        .map(|(v, es)| (*v, es.iter().map(|e| (e.target, attribute_of(&e.target))).collect()))
        .collect()
}

/// Number of distinct targets in a buffer.
pub fn distinct<T: Ord + Clone>(items: &[T]) -> u64 {
    let mut v = items.to_vec();
    v.sort();
    v.dedup();
    v.len() as u64
}
