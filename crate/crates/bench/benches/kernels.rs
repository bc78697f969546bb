use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use cnea_core::diversity::distance_to_average;
use cnea_core::engines::{pow_sample, Runner};
use cnea_core::niching::{high_density_regions, GridLayout, NichingConfig};
use cnea_core::stats::paired_ttest;
use cnea_core::{Algorithm, BenchmarkFn, EngineConfig, FunctionKind, Population, RngStream};
use cnea_core::Individual;

fn random_population(function: &BenchmarkFn, n: usize, seed: u64) -> Population {
    let mut rng = RngStream::new(seed);
    let members = (0..n)
        .map(|_| {
            let g = function.space().random_genome(&mut rng);
            let f = function.evaluate(&g).unwrap();
            Individual::evaluated(g, f)
        })
        .collect();
    Population::new(members)
}

fn bench_functions(c: &mut Criterion) {
    let mut group = c.benchmark_group("evaluate_dim100");
    for kind in FunctionKind::ALL {
        let f = BenchmarkFn::new(kind, 100).unwrap();
        let x = f.space().random_genome(&mut RngStream::new(1));
        group.bench_with_input(BenchmarkId::from_parameter(kind), &x, |b, x| {
            b.iter(|| f.evaluate(black_box(x)).unwrap())
        });
    }
    group.finish();
}

fn bench_diversity(c: &mut Criterion) {
    let f = BenchmarkFn::new(FunctionKind::Rastrigin, 100).unwrap();
    let pop = random_population(&f, 300, 2);
    c.bench_function("distance_to_average_300x100", |b| {
        b.iter(|| distance_to_average(black_box(&pop.members), f.space()).unwrap())
    });
}

fn bench_niching(c: &mut Criterion) {
    let mut group = c.benchmark_group("grid_niching_n300");
    for dim in [10, 100] {
        let f = BenchmarkFn::new(FunctionKind::Rastrigin, dim).unwrap();
        let pop = random_population(&f, 300, 3);
        let layout = GridLayout::new(f.space(), &NichingConfig::default(), &mut RngStream::new(4)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(dim), &pop, |b, pop| {
            b.iter(|| {
                let grid = layout.build(pop);
                high_density_regions(&grid, pop, 0.05)
            })
        });
    }
    group.finish();
}

fn bench_generations(c: &mut Criterion) {
    let mut group = c.benchmark_group("generation_rastrigin20");
    group.sample_size(20);
    let f = BenchmarkFn::new(FunctionKind::Rastrigin, 20).unwrap();
    for algo in Algorithm::ALL {
        let cfg = EngineConfig::new(algo);
        group.bench_function(BenchmarkId::from_parameter(algo), |b| {
            let mut rng = RngStream::new(5);
            let mut runner = Runner::new(&cfg, &f, &mut rng).unwrap();
            b.iter(|| {
                runner.step(&mut rng).unwrap();
            })
        });
    }
    group.finish();
}

fn bench_small_kernels(c: &mut Criterion) {
    let mut rng = RngStream::new(6);
    c.bench_function("pow_sample", |b| b.iter(|| pow_sample(black_box(10.0), &mut rng)));
    let a: Vec<f64> = (0..100).map(|i| (i as f64).sin()).collect();
    let bv: Vec<f64> = (0..100).map(|i| (i as f64).cos()).collect();
    c.bench_function("paired_ttest_100", |b| {
        b.iter(|| paired_ttest(black_box(&a), black_box(&bv)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_functions,
    bench_diversity,
    bench_niching,
    bench_generations,
    bench_small_kernels
);
criterion_main!(benches);
