use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use fockloop::iterate::{run, IterationConfig};
use fockloop::oracle::oracle_single_step;
use fockloop::step::step_coefficients;
use fockloop::sweep::{sweep, SweepSpec};
use fockloop::wigner::{wigner_state, GridSpec};
use fockloop::{Efficiency, Transmittance};

fn bench_single_step(c: &mut Criterion) {
    let tau = Transmittance::new(0.45).unwrap();
    let eta = Efficiency::new(0.8).unwrap();
    let mut group = c.benchmark_group("single_step");
    for n in [1usize, 4, 8] {
        group.bench_with_input(BenchmarkId::new("analytic", n), &n, |b, &n| {
            b.iter(|| step_coefficients(black_box(n), tau, eta))
        });
        group.bench_with_input(BenchmarkId::new("oracle", n), &n, |b, &n| {
            b.iter(|| oracle_single_step(black_box(n), tau, eta).unwrap())
        });
    }
    group.finish();
}

fn bench_run(c: &mut Criterion) {
    let cfg = IterationConfig::new(4, 0.5, 0.8).unwrap();
    c.bench_function("run_4_pulses", |b| b.iter(|| run(black_box(&cfg)).unwrap()));
}

fn bench_sweep(c: &mut Criterion) {
    let spec = SweepSpec::unit_square(3);
    c.bench_function("sweep_41x41_n3", |b| {
        b.iter(|| sweep(black_box(&spec)).unwrap())
    });
}

fn bench_wigner(c: &mut Criterion) {
    let state = run(&IterationConfig::new(3, 0.5, 0.8).unwrap())
        .unwrap()
        .final_state;
    let grid = GridSpec::default();
    c.bench_function("wigner_201x201", |b| {
        b.iter(|| wigner_state(black_box(&state), &grid).unwrap())
    });
}

criterion_group!(
    benches,
    bench_single_step,
    bench_run,
    bench_sweep,
    bench_wigner
);
criterion_main!(benches);
