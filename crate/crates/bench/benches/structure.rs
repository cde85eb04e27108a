use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hochschild::bvalgebra::{main_theorem_algebra, menichi_loop_s2, verify_bv_identities};
use hochschild::cyclic::{hc_minus_table, MixedComplex};
use hochschild::isocheck::{bv_isomorphism_exists, SearchSpace};
use hochschild::RingSpec;
use hochschild_bench::{algebra, label, INSTANCES};

fn identities(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_bv_identities");
    g.sample_size(10);
    for (r, n, m) in INSTANCES {
        let bv = main_theorem_algebra(r, n, m).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(label(r, n, m)), &bv, |b, bv| {
            b.iter(|| verify_bv_identities(bv, 2))
        });
    }
    g.finish();
}

fn negative_cyclic(c: &mut Criterion) {
    let mut g = c.benchmark_group("hc_minus_table");
    g.sample_size(10);
    for n in 1..=3 {
        let mc = MixedComplex::new(&algebra(RingSpec::Rationals, n, 1));
        g.bench_with_input(BenchmarkId::from_parameter(n), &mc, |b, mc| {
            b.iter(|| hc_minus_table(mc, -7..=6, 6).unwrap())
        });
    }
    g.finish();
}

fn isomorphism(c: &mut Criterion) {
    let a = main_theorem_algebra(RingSpec::Integers, 1, 1).unwrap();
    let b = menichi_loop_s2();
    let s = SearchSpace::new(8, 1).unwrap();
    c.bench_function("bv_isomorphism_exists/S2", |bch| {
        bch.iter(|| bv_isomorphism_exists(&a, &b, s))
    });
}

criterion_group!(benches, identities, negative_cyclic, isomorphism);
criterion_main!(benches);
