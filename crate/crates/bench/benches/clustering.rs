use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rsom::harness::kmeans;
use rsom::{estimate_k, rectify, train, RsomConfig, SomConfig};
use rsom_bench::{blobs_with_noise, correlated};

fn bench_train(c: &mut Criterion) {
    let ds = blobs_with_noise(200, 200, 1);
    let mut group = c.benchmark_group("som_train");
    for side in [3usize, 4, 6] {
        let cfg = SomConfig { epochs: 20, ..SomConfig::new(side, side) };
        group.bench_with_input(BenchmarkId::from_parameter(side * side), &cfg, |b, cfg| {
            b.iter(|| train(&ds, cfg).unwrap())
        });
    }
    group.finish();
}

fn bench_rectify(c: &mut Criterion) {
    let ds = blobs_with_noise(200, 200, 1);
    let cfg = RsomConfig::new(SomConfig::new(4, 4));
    c.bench_function("rectify_4x4_1200", |b| b.iter(|| rectify(&ds, &cfg).unwrap()));
}

fn bench_kmeans(c: &mut Criterion) {
    let ds = blobs_with_noise(200, 200, 1);
    c.bench_function("kmeans_k16_1200", |b| b.iter(|| kmeans(&ds, 16, 0, 100).unwrap()));
}

fn bench_estimate_k(c: &mut Criterion) {
    let mut group = c.benchmark_group("estimate_k");
    for d in [8usize, 32, 128] {
        let ds = correlated(2000, d);
        group.bench_with_input(BenchmarkId::from_parameter(d), &ds, |b, ds| {
            b.iter(|| estimate_k(ds, 0.4).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_train, bench_rectify, bench_kmeans, bench_estimate_k);
criterion_main!(benches);
