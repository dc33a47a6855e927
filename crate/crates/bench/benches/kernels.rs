use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use bibrank::matrices::build_matrices;
use bibrank::metrics::{gini, spearman};
use bibrank_bench::bench_corpus;

fn bench_matvec(c: &mut Criterion) {
    let corpus = bench_corpus(20_000, 5);
    let mats = build_matrices(&corpus);
    let x = vec![1.0 / mats.n_papers() as f64; mats.n_papers()];
    let y = vec![1.0 / mats.n_authors() as f64; mats.n_authors()];

    let mut group = c.benchmark_group("sparse");
    group.bench_function("matvec_citations", |b| {
        b.iter(|| mats.citations.matvec(black_box(&x)).unwrap())
    });
    group.bench_function("matvec_transpose_citations", |b| {
        b.iter(|| mats.citations.matvec_transpose(black_box(&x)).unwrap())
    });
    group.bench_function("matvec_transpose_incidence", |b| {
        b.iter(|| mats.incidence.matvec_transpose(black_box(&y)).unwrap())
    });
    group.finish();
}

fn bench_statistics(c: &mut Criterion) {
    let corpus = bench_corpus(20_000, 5);
    let mats = build_matrices(&corpus);
    let in_degrees: Vec<f64> = mats.citations.col_sums();
    let out_degrees: Vec<f64> = mats.citations.row_sums();

    let mut group = c.benchmark_group("metrics");
    for size in [1_000usize, 20_000] {
        group.bench_with_input(BenchmarkId::new("gini", size), &size, |b, &n| {
            b.iter(|| gini(black_box(&in_degrees[..n])).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("spearman", size), &size, |b, &n| {
            b.iter(|| spearman(black_box(&in_degrees[..n]), black_box(&out_degrees[..n])).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_matvec, bench_statistics);
criterion_main!(benches);
