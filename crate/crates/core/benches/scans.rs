use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use schottky::geodesy::double_coset_scan;
use schottky::heights::upsilon_scan;
use schottky::{Execution, Homography, SchottkyGroup};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn limit_cover(c: &mut Criterion) {
    let g = SchottkyGroup::worked_example();
    let mut group = c.benchmark_group("limit_cover_depth_7");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(g.limit_cover(7, exec).unwrap()))
        });
    }
    group.finish();
}

fn proper_fit(c: &mut Criterion) {
    let g = SchottkyGroup::worked_example();
    let mut group = c.benchmark_group("proper_fit_depth_5");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(g.fit_proper_constants(5, exec).unwrap()))
        });
    }
    group.finish();
}

fn upsilon(c: &mut Criterion) {
    let g = SchottkyGroup::worked_example();
    let mut group = c.benchmark_group("upsilon_length_10");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(upsilon_scan(&g, 10, exec).unwrap()))
        });
    }
    group.finish();
}

fn coset_scan(c: &mut Criterion) {
    let g5 = SchottkyGroup::worked_example();
    let squares = SchottkyGroup::sample(5, 2, 4).unwrap();
    let id = Homography::identity();
    let mut group = c.benchmark_group("cross_coset_scan_depth_6");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(double_coset_scan(&g5, &id, &squares, 6, 2, exec).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, limit_cover, proper_fit, upsilon, coset_scan);
criterion_main!(benches);
