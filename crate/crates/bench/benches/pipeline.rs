use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use advknow_bench::fixture;
use advknow_core::advknow::enumerate_splits;
use advknow_core::circuits::{run_alice, Algorithm};
use advknow_core::complexity::{min_queries, SearchBudget};
use advknow_core::engine::verify::{verify_grover_states, VerifyConfig};
use advknow_core::histories::{enumerate_histories, DEFAULT_PATH_BUDGET};

fn bench(c: &mut Criterion) {
    let (g4, _) = fixture("grover:4");
    c.bench_function("min_queries grover:4 full", |b| {
        b.iter(|| min_queries(black_box(&g4), g4.settings(), SearchBudget::default()).unwrap())
    });

    let (s3, b_c) = fixture("simon:3");
    c.bench_function("enumerate_splits simon:3", |b| {
        b.iter(|| enumerate_splits(black_box(&s3), &b_c).unwrap())
    });

    c.bench_function("run_alice simon:3", |b| {
        b.iter(|| run_alice(black_box(&s3), Algorithm::SimonQuantum).unwrap())
    });

    let config = VerifyConfig::default();
    c.bench_function("verify grover:2", |b| {
        b.iter(|| verify_grover_states(black_box(&config)).unwrap())
    });

    let (d3, b_c) = fixture("dj:3");
    let run = run_alice(&d3, Algorithm::DeutschJozsa).unwrap();
    c.bench_function("enumerate_histories dj:3", |b| {
        b.iter(|| enumerate_histories(black_box(&run), &b_c, DEFAULT_PATH_BUDGET).unwrap())
    });
}

criterion_group!(benches, bench);
criterion_main!(benches);
