use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use uniquant_bench::{gaussian, grid_2d};
use uniquant_core::classification::classify;
use uniquant_core::decomposition::decompose;
use uniquant_core::measure::Point;
use uniquant_core::quantization::quantize;
use uniquant_core::transport::exact_wasserstein;

fn bench_decompose(c: &mut Criterion) {
    let mut group = c.benchmark_group("decompose");
    for (m, n) in [(20, 50), (50, 100), (100, 400)] {
        let rho = grid_2d(m);
        group.bench_with_input(BenchmarkId::new(format!("grid{m}"), n), &n, |b, &n| {
            b.iter(|| decompose(black_box(&rho), n).unwrap())
        });
    }
    group.finish();
}

fn bench_wasserstein(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_wasserstein");
    group.sample_size(20);
    for (m, n) in [(20, 50), (50, 100)] {
        let rho = grid_2d(m);
        let mu = quantize(&rho, n).unwrap().empirical_measure();
        group.bench_with_input(BenchmarkId::new(format!("grid{m}"), n), &n, |b, _| {
            b.iter(|| exact_wasserstein(black_box(&mu), black_box(&rho), 1.0).unwrap())
        });
    }
    let (x, y) = (gaussian(300, 2, 1), gaussian(300, 2, 2));
    group.bench_function("gaussian300x300", |b| b.iter(|| exact_wasserstein(&x, &y, 2.0).unwrap()));
    group.finish();
}

fn bench_classify(c: &mut Criterion) {
    let cloud = gaussian(10_000, 3, 7);
    let points: Vec<Point> = cloud.atoms().iter().map(|a| a.point.clone()).collect();
    c.bench_function("classify_10000_into_100", |b| b.iter(|| classify(black_box(&points), 100).unwrap()));
}

criterion_group!(benches, bench_decompose, bench_wasserstein, bench_classify);
criterion_main!(benches);
