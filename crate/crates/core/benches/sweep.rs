//! Sequential vs data-parallel sweep and oracle timings.
//!
//! `cargo bench -p vaxprice` compares `jobs = 1` against all cores;
//! `cargo bench -p vaxprice --no-default-features` gives the rayon-free build.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use vaxprice::par::parallel_enabled;
use vaxprice::{
    bundled_historical, default_sweep_grid, oracle_solve, run_sweep, solve, ReducedProblem,
    ScenarioConfig, Tolerances,
};

fn sweep(c: &mut Criterion) {
    let grid = default_sweep_grid();
    let records = bundled_historical();
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("default_sweep");
    group.sample_size(20);
    let jobs: &[(&str, usize)] = if parallel_enabled() {
        &[("sequential", 1), ("parallel", 0)]
    } else {
        &[("sequential", 1)]
    };
    for &(name, j) in jobs {
        group.bench_function(BenchmarkId::new(name, grid.len()), |b| {
            b.iter(|| run_sweep(black_box(&grid), &records, j, &tol).unwrap())
        });
    }
    group.finish();
}

fn single_scenario(c: &mut Criterion) {
    let cfg = ScenarioConfig::with_factors(1, 157.05, 0.75, [234.0, 41.4], [31.96, 31.96]);
    let prob = ReducedProblem::from_scenario(&bundled_historical(), &cfg).unwrap();
    let tol = Tolerances::default();
    let label = if parallel_enabled() {
        "parallel"
    } else {
        "sequential"
    };

    c.bench_function("solve", |b| {
        b.iter(|| solve(black_box(&prob), &tol).unwrap())
    });

    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for n in [500usize, 2000] {
        group.bench_with_input(BenchmarkId::new(label, n), &n, |b, &n| {
            b.iter(|| oracle_solve(black_box(&prob), n, &tol).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sweep, single_scenario);
criterion_main!(benches);
