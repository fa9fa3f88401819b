use stratmean::datasets;
use stratmean::design::{DesignSummary, StratumSummary, StratumUnits};
use stratmean::montecarlo::{combination_count, exhaustive_variance_of_mean, Method};
use stratmean::{
    draw_stratified_srswor, enumerate_exhaustive, replicate, synthesize_population, Error,
    EstimatorKind, EstimatorSpec, FinitePopulation, ShapeParams,
};

fn small_population() -> FinitePopulation {
    let design = DesignSummary::new(
        "small",
        vec![
            StratumSummary::with_correlation(1, 7, 3, 50.0, 120.0, 40.0, 300.0, 0.8),
            StratumSummary::with_correlation(2, 9, 4, 80.0, 200.0, 90.0, 500.0, 0.6),
        ],
    )
    .validate()
    .unwrap();
    synthesize_population(&design, 17).unwrap()
}

#[test]
fn exhaustive_variance_identity_on_small_population() {
    let pop = small_population();
    let m = pop.design(&[3, 4]).unwrap().moments().unwrap();
    let exact = exhaustive_variance_of_mean(&pop, &[3, 4]).unwrap();
    assert!((exact - m.var_ybar).abs() <= 1e-9 * m.var_ybar);
    assert_eq!(combination_count(&pop, &[3, 4]), 35.0 * 126.0);
}

#[test]
fn exhaustive_report_is_exact_for_unbiased_and_t1() {
    // t1(w = 1) = 2ȳ - ȳx̄/X̄ has exact bias -cov/X̄
    let pop = small_population();
    let specs = [
        EstimatorSpec::new(EstimatorKind::Unbiased),
        EstimatorSpec::new(EstimatorKind::T1).with_shape(ShapeParams::power(1.0)),
    ];
    let report = enumerate_exhaustive(&pop, &[3, 4], &specs).unwrap();
    assert_eq!(report.method, Method::Exhaustive);
    assert_eq!(report.samples, 35 * 126);
    assert!(report.rows[0].empirical_bias.abs() < 1e-10);
    let t1 = &report.rows[1];
    assert!((t1.empirical_bias - t1.theoretical_bias).abs() < 1e-10);
}

#[test]
fn enumeration_limit() {
    let design = datasets::orchards().validate().unwrap();
    let pop = synthesize_population(&design, 1).unwrap();
    let err = enumerate_exhaustive(
        &pop,
        &design.sample_sizes(),
        &[EstimatorSpec::new(EstimatorKind::Unbiased)],
    )
    .unwrap_err();
    assert!(matches!(err, Error::EnumerationTooLarge { .. }));
}

#[test]
fn deviations_average_to_zero() {
    let pop = small_population();
    let m = pop.design(&[3, 4]).unwrap().moments().unwrap();
    let reps = 20_000u64;
    let (mut s0, mut s1, mut q0, mut q1) = (0.0, 0.0, 0.0, 0.0);
    for seed in 0..reps {
        let d = draw_stratified_srswor(&pop, &[3, 4], seed)
            .unwrap()
            .deviations(&m);
        s0 += d.e0;
        s1 += d.e1;
        q0 += d.e0 * d.e0;
        q1 += d.e1 * d.e1;
    }
    let n = reps as f64;
    let se0 = (q0 / n / n).sqrt();
    let se1 = (q1 / n / n).sqrt();
    assert!((s0 / n).abs() <= 3.0 * se0);
    assert!((s1 / n).abs() <= 3.0 * se1);
}

#[test]
fn report_is_independent_of_thread_count() {
    let pop = small_population();
    let specs = stratmean::mse::standard_specs();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| replicate(&pop, &[3, 4], &specs, 10_000, 42).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(3));
}

#[test]
fn short_runs_carry_no_verdict() {
    let pop = small_population();
    let report = replicate(
        &pop,
        &[3, 4],
        &[EstimatorSpec::new(EstimatorKind::Unbiased)],
        999,
        1,
    )
    .unwrap();
    assert_eq!(report.rows[0].mse_agrees, None);
    assert_eq!(report.rows[0].replications, 999);
    assert!(report.all_agree());
}

#[test]
fn estimator_failures_are_counted() {
    // x is zero on most units, so x̄_st = 0 happens regularly with n_h = 1
    let mut units = StratumUnits::default();
    for (y, x) in [(1.0, 0.0), (2.0, 0.0), (3.0, 0.0), (4.0, 5.0)] {
        units.push(y, x);
    }
    let pop = FinitePopulation {
        label: "zeros".into(),
        strata: vec![units],
        provenance: stratmean::montecarlo::Provenance {
            generator: "fixed".into(),
            seed: None,
        },
    };
    let report = replicate(
        &pop,
        &[1],
        &[EstimatorSpec::new(EstimatorKind::CombinedRatio)],
        2000,
        3,
    )
    .unwrap();
    let row = &report.rows[0];
    assert!(row.failures > 1000);
    assert_eq!(row.failures + row.replications, 2000);
}

#[test]
fn empirical_mse_dominates_squared_bias() {
    let pop = small_population();
    let report = replicate(&pop, &[3, 4], &stratmean::mse::standard_specs(), 5000, 9).unwrap();
    for row in &report.rows {
        assert!(row.empirical_mse >= row.empirical_bias * row.empirical_bias);
    }
}
