use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use spcls_core::generate::{all_closure_spaces_up_to, random_batch, SpaceParams};
use spcls_core::suite::{morphism_sweep, run_suite};
use spcls_core::{Execution, Limits};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn random_suite(c: &mut Criterion) {
    let spaces = random_batch(2024, 100, SpaceParams::default());
    let limits = Limits::default();
    let mut group = c.benchmark_group("random_suite_100");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run_suite(&spaces, &limits, exec))
        });
    }
    group.finish();
}

fn exhaustive_suite(c: &mut Criterion) {
    let spaces = all_closure_spaces_up_to(3);
    let limits = Limits::default();
    let mut group = c.benchmark_group("exhaustive_suite_le3");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| run_suite(&spaces, &limits, exec))
        });
    }
    group.finish();
}

fn morphisms(c: &mut Criterion) {
    let spaces = all_closure_spaces_up_to(2);
    let mut group = c.benchmark_group("morphism_sweep_le2");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| morphism_sweep(&spaces, exec))
        });
    }
    group.finish();
}

criterion_group!(benches, random_suite, exhaustive_suite, morphisms);
criterion_main!(benches);
