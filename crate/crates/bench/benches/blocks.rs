//! Zak-domain kernels and direct methods.
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gabiter_bench::gaussian_fixture;
use gabiter_core::iterations::{step_dual, step_frame_inverse, step_tight, TermScaling};
use gabiter_core::synthesis::reference_tight;
use gabiter_core::{eig_tight, factorize, inv_dual, run, svd_tight, unfactorize, Algorithm, IterationConfig};

fn transforms(c: &mut Criterion) {
    let mut group = c.benchmark_group("factorize");
    for (len, a) in [(432, 18), (1200, 30), (4800, 60)] {
        let (lattice, g, phi) = gaussian_fixture(len, a, a, 1.0);
        group.bench_with_input(BenchmarkId::new("forward", len), &len, |b, _| {
            b.iter(|| factorize(black_box(&g), &lattice))
        });
        group.bench_with_input(BenchmarkId::new("inverse", len), &len, |b, _| {
            b.iter(|| unfactorize(black_box(&phi)))
        });
    }
    group.finish();
}

fn steps(c: &mut Criterion) {
    let (_, _, phi) = gaussian_fixture(432, 18, 18, 1.0);
    let mut group = c.benchmark_group("step");
    group.bench_function("I", |b| b.iter(|| step_frame_inverse(black_box(&phi))));
    group.bench_function("II", |b| b.iter(|| step_tight(black_box(&phi), 2, TermScaling::Norm)));
    group.bench_function("III", |b| b.iter(|| step_tight(black_box(&phi), 3, TermScaling::Norm)));
    group.bench_function("IV", |b| b.iter(|| step_dual(black_box(&phi), &phi, 2, TermScaling::Norm)));
    group.bench_function("V", |b| b.iter(|| step_dual(black_box(&phi), &phi, 3, TermScaling::Norm)));
    group.finish();
}

fn direct(c: &mut Criterion) {
    let (lattice, g, phi) = gaussian_fixture(432, 18, 18, 1.0);
    let mut group = c.benchmark_group("direct");
    group.bench_function("eig", |b| b.iter(|| eig_tight(black_box(&phi))));
    group.bench_function("svd", |b| b.iter(|| svd_tight(black_box(&phi))));
    group.bench_function("inv", |b| b.iter(|| inv_dual(black_box(&phi))));
    group.bench_function("iterative II", |b| {
        b.iter(|| run(black_box(&g), &lattice, &IterationConfig::new(Algorithm::II)))
    });
    group.sample_size(10);
    group.bench_function("dense svd", |b| b.iter(|| reference_tight(black_box(&g), &lattice)));
    group.finish();
}

criterion_group!(benches, transforms, steps, direct);
criterion_main!(benches);
