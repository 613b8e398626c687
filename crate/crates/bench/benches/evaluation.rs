use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pqbezier::audit::{default_params, identity_audit, uniform_grid};
use pqbezier::basis::basis_row;
use pqbezier::Variant;
use pqbezier_bench::{bumpy_surface, params, zigzag_curve};

fn basis(c: &mut Criterion) {
    let mut group = c.benchmark_group("basis_row");
    for n in [3, 10, 64] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| basis_row(n, black_box(0.37), params()).unwrap())
        });
    }
    group.finish();
}

fn curves(c: &mut Criterion) {
    let mut group = c.benchmark_group("curve");
    for degree in [3, 10, 30] {
        let curve = zigzag_curve(degree);
        group.bench_with_input(BenchmarkId::new("direct", degree), &curve, |b, curve| {
            b.iter(|| curve.evaluate(black_box(0.37)))
        });
        for variant in [Variant::A, Variant::B] {
            let id = BenchmarkId::new(format!("de_casteljau_{}", variant.as_str()), degree);
            group.bench_with_input(id, &curve, |b, curve| {
                b.iter(|| curve.de_casteljau(black_box(0.37), variant))
            });
        }
        group.bench_with_input(BenchmarkId::new("elevate", degree), &curve, |b, curve| {
            b.iter(|| curve.degree_elevate().unwrap())
        });
        group.bench_with_input(
            BenchmarkId::new("polygon_distance", degree),
            &curve,
            |b, curve| b.iter(|| curve.polygon_distance()),
        );
    }
    group.finish();
}

fn surfaces(c: &mut Criterion) {
    let mut group = c.benchmark_group("surface");
    for degree in [3, 8] {
        let surface = bumpy_surface(degree);
        group.bench_with_input(BenchmarkId::new("direct", degree), &surface, |b, s| {
            b.iter(|| s.evaluate(black_box(0.3), black_box(0.6)))
        });
        group.bench_with_input(
            BenchmarkId::new("de_casteljau", degree),
            &surface,
            |b, s| b.iter(|| s.de_casteljau(black_box(0.3), black_box(0.6))),
        );
        group.bench_with_input(
            BenchmarkId::new("sample_grid_21", degree),
            &surface,
            |b, s| b.iter(|| s.sample_grid(21, 21).unwrap()),
        );
    }
    group.finish();
}

fn audit(c: &mut Criterion) {
    let params = default_params();
    let grid = uniform_grid(11);
    c.bench_function("identity_audit_n8", |b| {
        b.iter(|| identity_audit(8, &params, &grid).unwrap())
    });
}

criterion_group!(benches, basis, curves, surfaces, audit);
criterion_main!(benches);
