use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lvint_core::dynamics::{integrate, seeded_points};
use lvint_core::integrals::{enumerate_s, k_poly, EnumerationMethod};
use lvint_core::lax::char_poly_k;
use lvint_core::poisson::bracket;
use lvint_core::sigma::sigma_identity_checks;
use lvint_core::{IntegralFamily, SigmaMethod, SigmaTable, SystemSpec};

fn spec(n: usize, k: usize) -> SystemSpec {
    SystemSpec::new(n, k).unwrap()
}

fn brackets(c: &mut Criterion) {
    let mut g = c.benchmark_group("bracket");
    for (n, k) in [(7, 2), (9, 3), (9, 4)] {
        let s = spec(n, k);
        let a = k_poly(s, 1).unwrap();
        let b = k_poly(s, k).unwrap();
        g.bench_with_input(BenchmarkId::new("K1_Kk", s), &s, |bch, &s| {
            bch.iter(|| bracket(black_box(&a), black_box(&b), s).unwrap())
        });
    }
    g.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_s");
    let s = spec(10, 3);
    for (name, m) in [
        ("inequalities", EnumerationMethod::Inequalities),
        ("submatrix", EnumerationMethod::Submatrix),
    ] {
        g.bench_function(name, |b| b.iter(|| enumerate_s(black_box(s), 2, m)));
    }
    g.finish();
}

fn family(c: &mut Criterion) {
    c.bench_function("family LV(9,2)", |b| b.iter(|| IntegralFamily::build(black_box(spec(9, 2))).unwrap()));
}

fn char_poly(c: &mut Criterion) {
    let mut g = c.benchmark_group("char_poly");
    for kappa in [2, 3, 4] {
        g.bench_with_input(BenchmarkId::from_parameter(kappa), &kappa, |b, &kp| {
            b.iter(|| char_poly_k(kp, 0).unwrap())
        });
    }
    g.finish();
}

fn sigma(c: &mut Criterion) {
    let mut g = c.benchmark_group("sigma");
    g.bench_function("weighted k=20", |b| {
        b.iter(|| SigmaTable::compute(black_box(20), SigmaMethod::WeightedSum).unwrap())
    });
    g.bench_function("brute k=8", |b| b.iter(|| SigmaTable::compute(black_box(8), SigmaMethod::Brute).unwrap()));
    g.bench_function("identities k=8", |b| b.iter(|| sigma_identity_checks(black_box(8))));
    g.finish();
}

fn flow(c: &mut Criterion) {
    let mut g = c.benchmark_group("integrate");
    g.sample_size(10);
    for (n, k) in [(5, 1), (9, 2)] {
        let s = spec(n, k);
        let x0 = seeded_points(n, 1, 1).remove(0);
        g.bench_with_input(BenchmarkId::from_parameter(s), &s, |b, &s| {
            b.iter(|| integrate(s, black_box(&x0), 20.0, 1e-12).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, brackets, enumeration, family, char_poly, sigma, flow);
criterion_main!(benches);
