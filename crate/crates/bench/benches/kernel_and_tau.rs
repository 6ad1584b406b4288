use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use oqb_core::{
    corpus_model, kernel_stats, tau_main, tau_via_kernel, Interval, KernelConfig, Weights,
};

fn stock_config() -> KernelConfig {
    KernelConfig::new(
        Interval::new(0.0, 1.0).unwrap(),
        Weights::new(2.0, 1.0).unwrap(),
        0.25,
        0.4,
    )
    .unwrap()
}

fn bench_kernel_stats(c: &mut Criterion) {
    let cfg = stock_config();
    c.bench_function("kernel_stats_with_lq", |b| {
        b.iter(|| kernel_stats(black_box(&cfg), &[2.0, 1.5]).unwrap())
    });
}

fn bench_tau_boundary_form(c: &mut Criterion) {
    let m = corpus_model("exp").unwrap();
    let cfg = stock_config();
    c.bench_function("tau_boundary_form_exp", |b| {
        b.iter(|| tau_main(black_box(&m), &cfg).unwrap().total)
    });
}

fn bench_tau_kernel_form(c: &mut Criterion) {
    let m = corpus_model("exp").unwrap();
    let cfg = stock_config();
    c.bench_function("tau_kernel_form_exp", |b| {
        b.iter(|| tau_via_kernel(black_box(&m), &cfg).unwrap())
    });
}

criterion_group!(
    benches,
    bench_kernel_stats,
    bench_tau_boundary_form,
    bench_tau_kernel_form
);
criterion_main!(benches);
