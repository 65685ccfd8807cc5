use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pso_savl::harness::map_sequential;
use pso_savl::{
    mean_distances, BenchmarkFunction, BenchmarkProblem, RngStream, RunConfig, UniformSource,
    VlStrategyConfig,
};

fn trial_batch(c: &mut Criterion) {
    let problem = BenchmarkProblem::new(BenchmarkFunction::RotatedRastrigin, 10).unwrap();
    let config = RunConfig::pso_ldiw(10, 10, 300, VlStrategyConfig::state_based(0.4, 0.7));
    let trials: Vec<u64> = (0..8).collect();
    let job = |&t: &u64| pso_savl::run_trial(&config, &problem, t).map(|r| r.final_value);

    let mut group = c.benchmark_group("trials");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| map_sequential(&trials, job).unwrap())
    });
    #[cfg(feature = "parallel")]
    group.bench_function("parallel", |b| {
        b.iter(|| pso_savl::harness::map_parallel(&trials, None, job).unwrap())
    });
    group.finish();
}

fn evolutionary_factor_cost(c: &mut Criterion) {
    let mut group = c.benchmark_group("mean_distances");
    let mut rng = RngStream::from_seed(1);
    for n in [10, 20, 50] {
        let swarm: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..50).map(|_| rng.uniform()).collect())
            .collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &swarm, |b, s| {
            b.iter(|| mean_distances(s).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, trial_batch, evolutionary_factor_cost);
criterion_main!(benches);
