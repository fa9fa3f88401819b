use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use stratmean::datasets;
use stratmean::mse::{efficiency_table, standard_specs};
use stratmean::{
    enumerate_exhaustive, optimal_dual, replicate, synthesize_population, EstimatorKind,
    EstimatorSpec, ResolvedEstimator, SampleStats, ShapeParams,
};

fn formulas(c: &mut Criterion) {
    let design = datasets::sugarcane().validate().unwrap();
    let m = design.moments().unwrap();
    let specs = standard_specs();

    c.bench_function("aggregate_moments", |b| {
        b.iter(|| black_box(&design).moments().unwrap())
    });
    c.bench_function("optimal_dual_t5", |b| {
        let shape = ShapeParams::power(0.8);
        b.iter(|| optimal_dual(EstimatorKind::T5, black_box(&shape), black_box(&m)).unwrap())
    });
    c.bench_function("efficiency_table", |b| {
        b.iter(|| efficiency_table(black_box(&design), &specs).unwrap())
    });
}

fn point_estimates(c: &mut Criterion) {
    let stats = SampleStats::new(101.3, 318.2);
    let mut group = c.benchmark_group("estimate");
    for (name, estimator) in [
        (
            "ratio",
            ResolvedEstimator::plain(EstimatorKind::CombinedRatio),
        ),
        (
            "t1",
            ResolvedEstimator::new(EstimatorKind::T1, ShapeParams::power(0.78), 1.0, 0.0),
        ),
        (
            "t6",
            ResolvedEstimator::new(
                EstimatorKind::T6,
                ShapeParams::transform(1.3, 0.4, 0.1),
                0.99,
                -0.07,
            ),
        ),
    ] {
        group.bench_function(name, |b| {
            b.iter(|| {
                black_box(&estimator)
                    .estimate(black_box(&stats), 326.0)
                    .unwrap()
            })
        });
    }
    group.finish();
}

fn simulation(c: &mut Criterion) {
    let design = datasets::sugarcane().validate().unwrap();
    let pop = synthesize_population(&design, 1).unwrap();
    let sizes = design.sample_sizes();
    let specs = standard_specs();
    let mut group = c.benchmark_group("simulation");
    group.sample_size(10);
    group.bench_function("replicate_10k", |b| {
        b.iter(|| replicate(&pop, &sizes, &specs, 10_000, 3).unwrap())
    });
    group.bench_function("exhaustive_unbiased", |b| {
        let unbiased = [EstimatorSpec::new(EstimatorKind::Unbiased)];
        b.iter(|| enumerate_exhaustive(&pop, &sizes, &unbiased).unwrap())
    });
    group.finish();
}

criterion_group!(benches, formulas, point_estimates, simulation);
criterion_main!(benches);
