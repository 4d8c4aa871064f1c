use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qbaf_bench::{acyclic, contracting, divergence, mlp};
use qbaf_core::{
    analyze, integrate, iterate, mlp_to_qbaf, qbaf_to_mlp, run_suite, solve_acyclic, IntegrationConfig,
    IterationConfig, SuiteConfig,
};

fn discrete(c: &mut Criterion) {
    let mut g = c.benchmark_group("iterate");
    for n in [100, 1_000, 10_000] {
        let q = contracting(n, 4, 7);
        g.bench_with_input(BenchmarkId::new("contracting", n), &q, |b, q| {
            b.iter(|| iterate(black_box(q), &IterationConfig::default()).unwrap())
        });
    }
    let q = divergence(3, 0.7);
    g.bench_function("oscillating", |b| {
        b.iter(|| iterate(black_box(&q), &IterationConfig::default()).unwrap())
    });
    g.finish();
}

fn continuous(c: &mut Criterion) {
    let mut g = c.benchmark_group("integrate");
    for n in [100, 1_000] {
        let q = contracting(n, 4, 7);
        g.bench_with_input(BenchmarkId::new("contracting", n), &q, |b, q| {
            b.iter(|| integrate(black_box(q), &IntegrationConfig::default()).unwrap())
        });
    }
    let q = divergence(3, 0.7);
    g.bench_function("divergence", |b| {
        b.iter(|| integrate(black_box(&q), &IntegrationConfig::default()).unwrap())
    });
    g.finish();
}

fn structural(c: &mut Criterion) {
    let q = acyclic(10_000, 0.001, 3);
    c.bench_function("solve_acyclic/10000", |b| b.iter(|| solve_acyclic(black_box(&q)).unwrap()));
    c.bench_function("analyze/10000", |b| b.iter(|| analyze(black_box(&q))));
}

fn translation(c: &mut Criterion) {
    let (m, x) = mlp(6, 32, 5);
    c.bench_function("mlp_to_qbaf", |b| b.iter(|| mlp_to_qbaf(black_box(&m), &x).unwrap()));
    let q = acyclic(500, 0.02, 5);
    c.bench_function("qbaf_to_mlp", |b| b.iter(|| qbaf_to_mlp(black_box(&q)).unwrap()));
}

fn properties(c: &mut Criterion) {
    let mut g = c.benchmark_group("properties");
    g.sample_size(10);
    let cfg = SuiteConfig {
        instances: 20,
        ..Default::default()
    };
    g.bench_function("suite/20", |b| b.iter(|| run_suite(black_box(&cfg)).unwrap()));
    g.finish();
}

criterion_group!(benches, discrete, continuous, structural, translation, properties);
criterion_main!(benches);
