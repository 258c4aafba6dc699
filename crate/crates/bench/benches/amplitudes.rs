use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use posgeom::chy::solve_scattering;
use posgeom::gkz::{evaluate_euler, gkz_operators, EulerIntegrand, QuadConfig};
use posgeom::kinematics::SamplingMode;
use posgeom::tree::{enumerate_triangulations, tree_amplitude, tree_amplitude_value};
use posgeom_bench::kinematics;

fn trees(c: &mut Criterion) {
    let mut g = c.benchmark_group("tree");
    for n in [6, 8, 10] {
        g.bench_with_input(BenchmarkId::new("triangulations", n), &n, |b, &n| {
            b.iter(|| enumerate_triangulations(n))
        });
        let k = kinematics(n, SamplingMode::Generic);
        g.bench_with_input(BenchmarkId::new("value", n), &k, |b, k| {
            b.iter(|| tree_amplitude_value(k))
        });
    }
    g.bench_function("symbolic/5", |b| b.iter(|| tree_amplitude(5)));
    g.finish();
}

fn chy(c: &mut Criterion) {
    let mut g = c.benchmark_group("chy");
    g.sample_size(10);
    for n in [5, 6, 7] {
        let k = kinematics(n, SamplingMode::Generic);
        g.bench_with_input(BenchmarkId::new("solve", n), &k, |b, k| {
            b.iter(|| solve_scattering(k, 1e-10, 0))
        });
    }
    g.finish();
}

fn gkz(c: &mut Criterion) {
    let f = EulerIntegrand::two_site_chain();
    let mut g = c.benchmark_group("gkz");
    g.sample_size(10);
    g.bench_function("operators", |b| b.iter(|| gkz_operators(&f)));
    let coeffs = [1.0, 1.2, 0.8, 1.5, 0.9, 1.1, 1.3];
    g.bench_function("evaluate", |b| {
        b.iter(|| evaluate_euler(&f, &coeffs, &[0.25], &QuadConfig::default()))
    });
    g.finish();
}

criterion_group!(benches, trees, chy, gkz);
criterion_main!(benches);
