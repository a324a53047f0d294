use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gdba_bench::uniform_dataset;
use gdba_core::baselines::{kmeans, knn_table};
use gdba_core::eval::auc_from_scores;
use gdba_core::kernel::{kernel_matrix, KernelParams};
use gdba_core::oracles::symmetric_eigen;

fn bench_knn(c: &mut Criterion) {
    let mut group = c.benchmark_group("knn_table");
    for &n in &[200usize, 1000] {
        let data = uniform_dataset(n, 10, 2);
        group.bench_with_input(BenchmarkId::from_parameter(n), &data, |b, data| {
            b.iter(|| knn_table(data, 10).unwrap())
        });
    }
    group.finish();
}

fn bench_kmeans(c: &mut Criterion) {
    let data = uniform_dataset(2000, 10, 3);
    c.bench_function("kmeans/2000x10/k=10", |b| {
        b.iter(|| kmeans(&data, 10, 0).unwrap())
    });
}

fn bench_jacobi(c: &mut Criterion) {
    let mut group = c.benchmark_group("jacobi");
    group.sample_size(10);
    for &n in &[30usize, 100] {
        let k = kernel_matrix(&uniform_dataset(n, 3, 4), &KernelParams::new(0.5).unwrap()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &k, |b, k| {
            b.iter(|| symmetric_eigen(k).unwrap())
        });
    }
    group.finish();
}

fn bench_auc(c: &mut Criterion) {
    let n = 100_000;
    let scores: Vec<f64> = (0..n).map(|i| ((i * 7919) % 1000) as f64).collect();
    let labels: Vec<bool> = (0..n).map(|i| i % 37 == 0).collect();
    c.bench_function("auc/100k", |b| {
        b.iter(|| auc_from_scores(&scores, &labels).unwrap())
    });
}

criterion_group!(benches, bench_knn, bench_kmeans, bench_jacobi, bench_auc);
criterion_main!(benches);
