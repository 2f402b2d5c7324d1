use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use meanslab::series::{self, LemmaSeries};

fn bench_series(c: &mut Criterion) {
    c.bench_function("difference_sign_check/h3/200", |b| {
        b.iter(|| black_box(series::difference_sign_check(LemmaSeries::H3, 200).unwrap()))
    });
    c.bench_function("truncated_series_eval/h1/40", |b| {
        b.iter(|| black_box(series::truncated_series_eval(LemmaSeries::H1, black_box(0.6), 40).unwrap()))
    });
}

criterion_group!(benches, bench_series);
criterion_main!(benches);
