use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use hereditary::fit::{fit_hn, hn_samples, log_frequencies, FitOptions};
use hereditary::kernels::{hn_relaxation_kernel, p_kernel};
use hereditary::quadrature_oracle::{eh_integral, inverse_laplace, InverseLaplaceSpec};
use hereditary::specfun::{eh_alpha_series, gauss_2f1_11, kummer_1f1};
use hereditary::{Family, FractionalOrder, HNParams, KernelModel, QuadratureSpec, SeriesControl};

fn special_functions(c: &mut Criterion) {
    let ctl = SeriesControl::default();
    let half = FractionalOrder::new(0.5).unwrap();
    c.bench_function("kummer 1F1(0.61; 1; -20)", |b| {
        b.iter(|| kummer_1f1(black_box(0.61), 1.0, black_box(-20.0), &ctl))
    });
    c.bench_function("gauss 2F1(1, 1; 2.35; -40)", |b| {
        b.iter(|| gauss_2f1_11(black_box(2.35), black_box(-40.0)))
    });
    c.bench_function("gauss 2F1(1, 1; 3.5; -1e4)", |b| {
        b.iter(|| gauss_2f1_11(black_box(3.5), black_box(-1e4)))
    });
    c.bench_function("eh series at t = 5", |b| {
        b.iter(|| eh_alpha_series(half, 1.0, black_box(5.0), &ctl))
    });
    let quad = QuadratureSpec::default();
    c.bench_function("eh integral at t = 50", |b| {
        b.iter(|| eh_integral(0.5, 1.0, black_box(50.0), &quad))
    });
}

fn kernels(c: &mut Criterion) {
    let ctl = SeriesControl::default();
    let p = HNParams::shape(0.61, 0.8, 1.0).unwrap();
    c.bench_function("hn kernel, series route", |b| {
        b.iter(|| hn_relaxation_kernel(&p, black_box(1.0), &ctl))
    });
    c.bench_function("hn kernel, spectral route", |b| {
        b.iter(|| hn_relaxation_kernel(&p, black_box(20.0), &ctl))
    });
    let a = FractionalOrder::new(0.5).unwrap();
    c.bench_function("rational kernel", |b| {
        b.iter(|| p_kernel(a, 0.5, 1.0, black_box(2.0), &ctl))
    });
    let model = KernelModel::new(
        Family::HavriliakNegami,
        a,
        FractionalOrder::new(0.8).unwrap(),
        1.0,
    )
    .unwrap();
    let spec = InverseLaplaceSpec::default();
    c.bench_function("talbot inversion of hn", |b| {
        b.iter(|| inverse_laplace(|s| model.transform(s), black_box(0.5), &spec))
    });
}

fn fitting(c: &mut Criterion) {
    let truth = HNParams::shape(0.61, 0.8, 1.0).unwrap();
    let data = hn_samples(&truth, &log_frequencies(1e-3, 1e3, 50)).unwrap();
    c.bench_function("hn fit, 50 samples", |b| {
        b.iter(|| fit_hn(black_box(&data), &FitOptions::default()))
    });
}

criterion_group!(benches, special_functions, kernels, fitting);
criterion_main!(benches);
