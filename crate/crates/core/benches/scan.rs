use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use flintlab::criterion::scan_criterion;
use flintlab::rationality::spike_indices_with;
use flintlab::series::{partial_sum_with, SeriesSpec};
use flintlab::Exec;

fn modes() -> [(&'static str, Exec); 2] {
    [("sequential", Exec::Sequential), ("parallel", Exec::Parallel { threads: 0 })]
}

fn bench_partial_sum(c: &mut Criterion) {
    let mut g = c.benchmark_group("partial_sum_k20000_s1");
    g.sample_size(10);
    let spec = SeriesSpec::new(1, 128);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| partial_sum_with(black_box(20_000), &spec, None, exec).unwrap())
        });
    }
    g.finish();
}

fn bench_spikes(c: &mut Criterion) {
    let mut g = c.benchmark_group("spike_indices_50000");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| spike_indices_with(black_box(50_000), 64, exec).unwrap())
        });
    }
    g.finish();
}

fn bench_scan(c: &mut Criterion) {
    let mut g = c.benchmark_group("scan_criterion_20000_s3");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| scan_criterion(1, black_box(20_000), 3, 0.1, 64, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_partial_sum, bench_spikes, bench_scan);
criterion_main!(benches);
