use asymwell::oracle::{solve_spectrum, GridSpec};
use asymwell::quantize::{solve_pair_exact, solve_pair_quadratic};
use asymwell::specfun::pcf_d;
use asymwell::SolveOptions;
use asymwell_bench::{piecewise, quartic};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn pcf(c: &mut Criterion) {
    let mut g = c.benchmark_group("pcf_d");
    for (nu, z) in [(0.3, 1.0), (2.7, 4.0), (5.5, 12.0)] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("nu{nu}_z{z}")), &(nu, z), |b, &(nu, z)| {
            b.iter(|| pcf_d(black_box(nu), black_box(z)).unwrap())
        });
    }
    g.finish();
}

fn pair(c: &mut Criterion) {
    let p = piecewise(2e-3);
    c.bench_function("solve_pair_exact", |b| b.iter(|| solve_pair_exact(black_box(&p), 0, 0).unwrap()));
    c.bench_function("solve_pair_quadratic", |b| b.iter(|| solve_pair_quadratic(black_box(&p), 0, 0).unwrap()));
}

fn spectrum(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_spectrum");
    g.sample_size(10);
    let p = quartic(5.0, 0.0);
    for n in [2001usize, 8001] {
        let grid = GridSpec::auto(&p, n, 4).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &grid, |b, grid| {
            b.iter(|| solve_spectrum(&p, grid, 4, SolveOptions::default()).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, pcf, pair, spectrum);
criterion_main!(benches);
