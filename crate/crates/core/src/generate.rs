//! Seeded synthetic graphs. Vertex ids are `0..n`.

use std::collections::HashSet;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

fn weight(rng: &mut ChaCha8Rng, weighted: bool) -> Option<f64> {
    weighted.then(|| rng.gen_range(1..=1000) as f64 / 10.0)
}

fn max_pairs(n: u64, directed: bool) -> u64 {
    let all = n.saturating_mul(n.saturating_sub(1));
    if directed {
        all
    } else {
        all / 2
    }
}

fn key(u: u64, v: u64, directed: bool) -> (u64, u64) {
    if directed || u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Uniform random graph with `n` vertices and about `avg_degree` adjacency
/// entries per vertex, no self-loops and no parallel edges.
pub fn random_graph(
    n: u64,
    avg_degree: f64,
    directed: bool,
    weighted: bool,
    seed: u64,
) -> Result<Graph<u64>> {
    random_inner(n, avg_degree, directed, weighted, false, seed)
}

/// Undirected random graph that is guaranteed to be connected: a spanning
/// path over a random permutation plus uniform edges up to `avg_degree`.
pub fn random_connected(n: u64, avg_degree: f64, weighted: bool, seed: u64) -> Result<Graph<u64>> {
    random_inner(n, avg_degree, false, weighted, true, seed)
}

fn random_inner(
    n: u64,
    avg_degree: f64,
    directed: bool,
    weighted: bool,
    connected: bool,
    seed: u64,
) -> Result<Graph<u64>> {
    if avg_degree.is_nan() || avg_degree < 0.0 {
        return Err(Error::Config(format!("average degree {avg_degree} must be >= 0")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(directed, weighted);
    for v in 0..n {
        g.add_vertex(v);
    }
    let per_edge = if directed { 1.0 } else { 2.0 };
    let target = ((n as f64 * avg_degree / per_edge).round() as u64).min(max_pairs(n, directed));
    let mut seen = HashSet::with_capacity(target as usize);

    if connected && n > 1 {
        let mut order: Vec<u64> = (0..n).collect();
        order.shuffle(&mut rng);
        for w in order.windows(2) {
            seen.insert(key(w[0], w[1], false));
            let wt = weight(&mut rng, weighted);
            g.add_edge(w[0], w[1], wt);
        }
    }
    while (seen.len() as u64) < target {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v || !seen.insert(key(u, v, directed)) {
            continue;
        }
        let wt = weight(&mut rng, weighted);
        g.add_edge(u, v, wt);
    }
    Ok(g)
}

/// Undirected Chung-Lu graph whose expected degrees follow a power law with
/// exponent `gamma` (> 2). Labels are randomly permuted so high-degree
/// vertices do not cluster at small ids.
pub fn power_law(n: u64, avg_degree: f64, gamma: f64, seed: u64) -> Result<Graph<u64>> {
    if gamma <= 2.0 {
        return Err(Error::Config(format!("power-law exponent {gamma} must be > 2")));
    }
    if n < 2 {
        return random_graph(n, 0.0, false, false, seed);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exponent = -1.0 / (gamma - 1.0);
    let weights: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).powf(exponent)).collect();
    let dist = WeightedIndex::new(&weights).map_err(|e| Error::Config(e.to_string()))?;
    let mut labels: Vec<u64> = (0..n).collect();
    labels.shuffle(&mut rng);

    let mut g = Graph::new(false, false);
    for v in 0..n {
        g.add_vertex(v);
    }
    let samples = (n as f64 * avg_degree / 2.0).round() as u64;
    let mut seen = HashSet::with_capacity(samples as usize);
    for _ in 0..samples {
        let u = labels[dist.sample(&mut rng)];
        let v = labels[dist.sample(&mut rng)];
        if u != v && seen.insert(key(u, v, false)) {
            g.add_edge(u, v, None);
        }
    }
    Ok(g)
}

/// Undirected star: center 0, leaves `1..=leaves`.
pub fn star(leaves: u64) -> Graph<u64> {
    let mut g = Graph::new(false, false);
    g.add_vertex(0);
    for v in 1..=leaves {
        g.add_edge(0, v, None);
    }
    g
}

/// Undirected path `0 - 1 - ... - (n-1)`.
pub fn path(n: u64) -> Graph<u64> {
    let mut g = Graph::new(false, false);
    for v in 0..n {
        g.add_vertex(v);
        if v > 0 {
            g.add_edge(v - 1, v, None);
        }
    }
    g
}

/// Undirected complete bipartite graph with sides `0..a` and `a..a+b`.
pub fn complete_bipartite(a: u64, b: u64) -> Graph<u64> {
    let mut g = Graph::new(false, false);
    for v in 0..a + b {
        g.add_vertex(v);
    }
    for u in 0..a {
        for v in a..a + b {
            g.add_edge(u, v, None);
        }
    }
    g
}
