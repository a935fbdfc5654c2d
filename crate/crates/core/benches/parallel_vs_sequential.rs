//! Suite throughput with the rayon path against the sequential fallback.
//! Without the `parallel` feature both rows run sequentially.

use std::hint::black_box;

use abelmod::check::{run_criterion, Execution, SuiteConfig};
use abelmod::linalg::Mode;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn suite_slices(c: &mut Criterion) {
    let mut group = c.benchmark_group("criterion_slice");
    group.sample_size(10);
    // Triangularization in float mode and the Hilbert scheme transports in
    // exact mode, at a few percent of the acceptance counts.
    for (id, mode) in [(1, Mode::Float), (5, Mode::Exact), (6, Mode::Exact)] {
        for execution in [Execution::Sequential, Execution::Parallel] {
            let config = SuiteConfig {
                mode,
                scale: 0.05,
                execution,
                ..SuiteConfig::default()
            };
            group.bench_with_input(BenchmarkId::new(format!("{execution:?}"), id), &config, |b, config| {
                b.iter(|| black_box(run_criterion(id, config)))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, suite_slices);
criterion_main!(benches);
