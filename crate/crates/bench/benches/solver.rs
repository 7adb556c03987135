use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dbar_bench::fixture_field;
use dbar_core::quadrature::{analyze, QuadratureRule};
use dbar_core::solver::solve_min_norm;
use dbar_core::{Complex64, OperatorParams};

fn solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_min_norm");
    for n in [16usize, 64, 256] {
        let f = fixture_field(7, 8, n);
        for k in [1u32, 4] {
            let params = OperatorParams::new(k, Complex64::new(1.0, -2.0)).unwrap();
            group.bench_with_input(BenchmarkId::new(format!("k{k}"), n), &f, |b, f| {
                b.iter(|| solve_min_norm(f, &params, n).unwrap())
            });
        }
    }
    group.finish();
}

fn quadrature(c: &mut Criterion) {
    let rule = QuadratureRule::default_for(8, 32, 2).unwrap();
    c.bench_function("analyze_8x32", |b| {
        b.iter(|| analyze(|z| (z * z.conj()).exp() * (-(z.norm_sqr())).exp(), &rule, 8, 32).unwrap())
    });
}

criterion_group!(benches, solve, quadrature);
criterion_main!(benches);
