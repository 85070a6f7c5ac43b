use std::hint::black_box;

use cayden::cayley::{diameter, dilate_digraph};
use cayden::kappa::{kappa, SearchOptions};
use cayden::mdd::{build_mdd, verify_mdd};
use cayden::zmatrix::smith_normal_form;
use cayden_bench::{cubic16, gamma2, snf_input};
use criterion::{criterion_group, criterion_main, Criterion};

fn snf(c: &mut Criterion) {
    let m = snf_input();
    c.bench_function("snf 3x3", |b| b.iter(|| smith_normal_form(black_box(&m))));
}

fn diameters(c: &mut Criterion) {
    let g = dilate_digraph(&gamma2(), 4).unwrap();
    c.bench_function("diameter 4Γ2 (n=1152)", |b| {
        b.iter(|| diameter(black_box(&g)))
    });
    let h = dilate_digraph(&cubic16(), 5).unwrap();
    c.bench_function("diameter 5·Z16 (n=2000)", |b| {
        b.iter(|| diameter(black_box(&h)))
    });
}

fn mdds(c: &mut Criterion) {
    let g = dilate_digraph(&gamma2(), 2).unwrap();
    c.bench_function("build_mdd 2Γ2", |b| {
        b.iter(|| build_mdd(black_box(&g)).unwrap())
    });
    let h = build_mdd(&g).unwrap();
    c.bench_function("verify_mdd 2Γ2", |b| b.iter(|| verify_mdd(black_box(&h))));
}

fn search(c: &mut Criterion) {
    let opts = SearchOptions {
        jobs: 1,
        ..SearchOptions::default()
    };
    let mut group = c.benchmark_group("kappa");
    group.sample_size(10);
    group.bench_function("d=2 n=72", |b| b.iter(|| kappa(2, 72, &opts).unwrap()));
    group.bench_function("d=3 n=60", |b| b.iter(|| kappa(3, 60, &opts).unwrap()));
    group.finish();
}

criterion_group!(benches, snf, diameters, mdds, search);
criterion_main!(benches);
