use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use zeromean::linprog::{min_l1_combination, origin_in_hull};
use zeromean::trig::{curve_points_circle, Frequency, Spectrum, TorusPoint, TrigPoly};
use zeromean::witness::{interval_positivity_with, WitnessOptions};

fn bench_evaluate(c: &mut Criterion) {
    let f = TrigPoly::new(
        1,
        (1..=8)
            .map(|k| (Frequency::new(vec![k]).unwrap(), 0.3 * k as f64, -0.1))
            .collect(),
    )
    .unwrap();
    c.bench_function("evaluate degree-8 poly", |b| {
        b.iter(|| f.evaluate(black_box(&TorusPoint::circle(0.37))).unwrap())
    });
}

fn bench_curve_batch(c: &mut Criterion) {
    let s = Spectrum::initial_segment(4).unwrap();
    let params: Vec<f64> = (0..1024).map(|j| j as f64 / 1024.0).collect();
    c.bench_function("curve points, 1024 params", |b| {
        b.iter(|| curve_points_circle(black_box(&s), black_box(&params)).unwrap())
    });
}

fn bench_hull(c: &mut Criterion) {
    let s = Spectrum::initial_segment(2).unwrap();
    let params: Vec<f64> = (0..200).map(|j| j as f64 / 200.0).collect();
    let pts = curve_points_circle(&s, &params).unwrap();
    c.bench_function("origin_in_hull, 200 curve points", |b| {
        b.iter(|| origin_in_hull(black_box(&pts), 1e-9).unwrap())
    });
}

fn bench_max_margin(c: &mut Criterion) {
    let s = Spectrum::initial_segment(3).unwrap();
    let params: Vec<f64> = (0..=1024).map(|j| 0.7 * j as f64 / 1024.0).collect();
    let pts = curve_points_circle(&s, &params).unwrap();
    c.bench_function("max-margin LP, 1025 arc points", |b| {
        b.iter(|| min_l1_combination(black_box(&pts)).unwrap())
    });
}

fn bench_rules(c: &mut Criterion) {
    c.bench_function("equispaced rule d=8", |b| {
        b.iter(|| zeromean::cubature::equispaced_rule(black_box(8)).unwrap())
    });
    c.bench_function("gauss rule m=16", |b| {
        b.iter(|| zeromean::cubature::gauss_legendre_rule(black_box(16)).unwrap())
    });
}

fn bench_interval_positivity(c: &mut Criterion) {
    let s = Spectrum::initial_segment(2).unwrap();
    let iv = zeromean::trig::Interval::new(0.0, 0.6).unwrap();
    let opts = WitnessOptions {
        grid_resolution: 512,
        ..WitnessOptions::default()
    };
    c.bench_function("interval positivity, grid 512", |b| {
        b.iter(|| interval_positivity_with(black_box(&s), black_box(&iv), &opts).unwrap())
    });
}

criterion_group!(
    benches,
    bench_evaluate,
    bench_curve_batch,
    bench_hull,
    bench_max_margin,
    bench_rules,
    bench_interval_positivity
);
criterion_main!(benches);
