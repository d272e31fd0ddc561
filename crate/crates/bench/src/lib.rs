//! Shared fixtures for the benchmarks.

use pregelkit::generate::{power_law, random_graph};
use pregelkit::{Config, Graph, MirrorThreshold};

pub const SEED: u64 = 7;
pub const WORKERS: usize = 8;

/// Skewed undirected graph with a few hubs of degree in the thousands.
pub fn skewed(n: u64) -> Graph<u64> {
    power_law(n, 10.0, 2.1, SEED).expect("valid generator parameters")
}

/// Uniform random graph.
pub fn uniform(n: u64, avg_degree: f64, directed: bool, weighted: bool) -> Graph<u64> {
    random_graph(n, avg_degree, directed, weighted, SEED).expect("valid generator parameters")
}

pub fn config(mirror: MirrorThreshold, combiner: bool) -> Config {
    Config {
        workers: WORKERS,
        mirror,
        combiner,
        ..Config::default()
    }
}
