use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use moricone::fixtures;
use moricone::strict_inclusion::solve_s_system;
use moricone::thresholds::ray_certificate;
use moricone::zariski::zariski_decompose;
use moricone::{NegativeCurveRecord, Rational, ThresholdContext};

fn ray_certificates(c: &mut Criterion) {
    let p = fixtures::bundled("p2-r12").unwrap();
    let x = p.model().unwrap();
    let curves = p.curve_records(&x).unwrap();
    let s = ThresholdContext::from_model(&x).s_threshold(1).unwrap();
    c.bench_function("ray_certificate exceptional", |b| {
        b.iter(|| ray_certificate(black_box(&x), black_box(&curves[0]), black_box(&s)).unwrap())
    });
    c.bench_function("ray_certificate line", |b| {
        b.iter(|| ray_certificate(black_box(&x), black_box(&curves[40]), black_box(&s)).unwrap())
    });
}

fn zariski(c: &mut Criterion) {
    let x = fixtures::p2(5);
    let curves: Vec<NegativeCurveRecord> = (1..=5).map(|i| NegativeCurveRecord::exceptional(&x, i).unwrap()).collect();
    let d = x.rational_class(&[3, 2, 1, 0, -1, 2].map(Rational::from)).unwrap();
    c.bench_function("zariski_decompose Bl_5", |b| {
        b.iter(|| zariski_decompose(black_box(&x), black_box(&d), black_box(&curves)).unwrap())
    });
}

fn s_system(c: &mut Criterion) {
    let ctx = ThresholdContext::from_model(&fixtures::p2(12));
    c.bench_function("solve_s_system P2 r=12", |b| b.iter(|| solve_s_system(black_box(&ctx)).unwrap()));
}

criterion_group!(benches, ray_certificates, zariski, s_system);
criterion_main!(benches);
