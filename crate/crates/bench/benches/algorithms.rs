use criterion::{criterion_group, criterion_main, Criterion};
use pregelkit::algorithms::{HashMin, Msf, PageRank, ShiloachVishkin, Sssp};
use pregelkit::{run, MirrorThreshold};
use pregelkit_bench::{config, uniform};

fn algorithms(c: &mut Criterion) {
    let undirected = uniform(10_000, 6.0, false, false);
    let weighted = uniform(10_000, 6.0, false, true);
    let directed = uniform(10_000, 6.0, true, true);
    let cfg = config(MirrorThreshold::Off, true);

    let mut group = c.benchmark_group("algorithms");
    group.sample_size(10);
    group.bench_function("hashmin", |b| b.iter(|| run(&undirected, &HashMin::new(), &cfg).unwrap()));
    group.bench_function("sv_reqresp", |b| {
        b.iter(|| run(&undirected, &ShiloachVishkin::new(true), &cfg).unwrap())
    });
    group.bench_function("sv_messages", |b| {
        b.iter(|| run(&undirected, &ShiloachVishkin::new(false), &cfg).unwrap())
    });
    group.bench_function("sssp", |b| b.iter(|| run(&directed, &Sssp::new(0), &cfg).unwrap()));
    group.bench_function("pagerank", |b| {
        b.iter(|| run(&directed, &PageRank::new(1e-4), &cfg).unwrap())
    });
    group.bench_function("msf", |b| b.iter(|| run(&weighted, &Msf::new(), &cfg).unwrap()));
    group.finish();
}

criterion_group!(benches, algorithms);
criterion_main!(benches);
