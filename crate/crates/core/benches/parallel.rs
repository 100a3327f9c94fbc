use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use diffeolin::oracle::{classify_batch, OracleConfig};
use diffeolin::verify::{oracle_corpus, tensor_grid};
use diffeolin::{tensor, Exec};

fn oracle_batch(c: &mut Criterion) {
    let corpus = oracle_corpus(200, 8);
    let cfg = OracleConfig::default();
    let mut group = c.benchmark_group("oracle_batch");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| classify_batch(black_box(&corpus), &cfg, exec))
        });
    }
    group.finish();
}

fn tensor_dual_grid(c: &mut Criterion) {
    let grid = tensor_grid();
    let cells: Vec<(usize, usize)> = (0..grid.len()).flat_map(|i| (0..grid.len()).map(move |j| (i, j))).collect();
    let mut group = c.benchmark_group("tensor_dual_grid");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        group.bench_with_input(BenchmarkId::from_parameter(format!("{exec:?}")), &exec, |b, &exec| {
            b.iter(|| exec.map(&cells, |&(i, j)| tensor::tensor_dual_iso(&grid[i], &grid[j]).map(|f| f.rank).ok()))
        });
    }
    group.finish();
}

criterion_group!(benches, oracle_batch, tensor_dual_grid);
criterion_main!(benches);
