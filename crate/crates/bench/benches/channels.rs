use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pregelkit::algorithms::{AttributeMsg, AttributeReq, HashMin};
use pregelkit::{run, MirrorThreshold};
use pregelkit_bench::{config, skewed, uniform};

fn mirroring(c: &mut Criterion) {
    let g = skewed(20_000);
    let mut group = c.benchmark_group("hashmin_mirroring");
    group.sample_size(10);
    for tau in [MirrorThreshold::Off, MirrorThreshold::Fixed(100.0), MirrorThreshold::CostModel] {
        let cfg = config(tau, true);
        group.bench_with_input(BenchmarkId::from_parameter(tau), &cfg, |b, cfg| {
            b.iter(|| run(&g, &HashMin::new(), cfg).unwrap())
        });
    }
    group.finish();
}

fn combiner(c: &mut Criterion) {
    let g = uniform(20_000, 8.0, false, false);
    let mut group = c.benchmark_group("hashmin_combiner");
    group.sample_size(10);
    for on in [true, false] {
        let cfg = config(MirrorThreshold::Off, on);
        group.bench_with_input(BenchmarkId::from_parameter(on), &cfg, |b, cfg| {
            b.iter(|| run(&g, &HashMin::new(), cfg).unwrap())
        });
    }
    group.finish();
}

fn request_respond(c: &mut Criterion) {
    let g = skewed(20_000);
    let cfg = config(MirrorThreshold::Off, true);
    let mut group = c.benchmark_group("attribute_broadcast");
    group.sample_size(10);
    group.bench_function("reqresp", |b| b.iter(|| run(&g, &AttributeReq::new(), &cfg).unwrap()));
    group.bench_function("messages", |b| b.iter(|| run(&g, &AttributeMsg::new(), &cfg).unwrap()));
    group.finish();
}

criterion_group!(benches, mirroring, combiner, request_respond);
criterion_main!(benches);
