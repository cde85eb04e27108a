use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hochschild::barcomplex::bar_hh_module;
use hochschild::resolution::{hh_modules, verify_chain_map};
use hochschild_bench::{algebra, label, INSTANCES};

fn periodic(c: &mut Criterion) {
    let mut g = c.benchmark_group("hh_modules");
    for (r, n, m) in INSTANCES {
        let a = algebra(r, n, m);
        g.bench_with_input(BenchmarkId::from_parameter(label(r, n, m)), &a, |b, a| {
            b.iter(|| hh_modules(a, 8))
        });
    }
    g.finish();
}

fn bar(c: &mut Criterion) {
    let mut g = c.benchmark_group("bar_hh_module");
    g.sample_size(10);
    for (r, n, m) in INSTANCES {
        let a = algebra(r, n, m);
        g.bench_with_input(BenchmarkId::from_parameter(label(r, n, m)), &a, |b, a| {
            b.iter(|| {
                (0..=3)
                    .map(|q| bar_hh_module(a, q).unwrap())
                    .collect::<Vec<_>>()
            })
        });
    }
    g.finish();
}

fn chain_map(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_chain_map");
    g.sample_size(10);
    for (r, n, m) in INSTANCES {
        let a = algebra(r, n, m);
        g.bench_with_input(BenchmarkId::from_parameter(label(r, n, m)), &a, |b, a| {
            b.iter(|| verify_chain_map(a, 3, None))
        });
    }
    g.finish();
}

criterion_group!(benches, periodic, bar, chain_map);
criterion_main!(benches);
