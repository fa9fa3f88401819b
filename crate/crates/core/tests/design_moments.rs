use proptest::prelude::*;
use stratmean::datasets;
use stratmean::design::{CombinedMoments, DesignSummary, StratumSummary};
use stratmean::{summarize_stratum, synthesize_population, Microdata};

/// Direct evaluation of Σ W_h² γ_h S over (N_h, n_h, S) triples.
fn weighted_sum(rows: &[(f64, f64, f64)]) -> f64 {
    let total: f64 = rows.iter().map(|r| r.0).sum();
    rows.iter()
        .map(|&(big_n, n, s)| {
            let w = big_n / total;
            w * w * (1.0 / n - 1.0 / big_n) * s
        })
        .sum()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn sugarcane_moments_match_direct_summation() {
    let m = datasets::sugarcane().validate().unwrap().moments().unwrap();
    let rho: [f64; 3] = [0.9455626, 0.948196, 0.7523324];
    let vy: [f64; 3] = [80.0, 226.515, 120.238];
    let vx: [f64; 3] = [2706.666, 1881.06, 2890.476];
    let sizes = [(6.0, 3.0), (12.0, 4.0), (7.0, 3.0)];
    let pick = |s: &[f64; 3]| -> Vec<(f64, f64, f64)> {
        sizes.iter().zip(s).map(|(&(a, b), &c)| (a, b, c)).collect()
    };
    let cov: [f64; 3] = std::array::from_fn(|i| rho[i] * (vy[i] * vx[i]).sqrt());

    assert!(rel(m.var_ybar, weighted_sum(&pick(&vy))) < 1e-13);
    assert!(rel(m.var_xbar, weighted_sum(&pick(&vx))) < 1e-13);
    assert!(rel(m.cov_xybar, weighted_sum(&pick(&cov))) < 1e-13);

    // frozen from the direct summation above
    assert!(rel(m.var_ybar, 11.261730133333334) < 1e-12);
    assert!(rel(m.var_xbar, 141.3811392) < 1e-12);
    assert!(rel(m.cov_xybar, 34.61452544862792) < 1e-12);
    // published table entry
    assert!(rel(m.var_ybar, 11.26173) < 1e-6);

    assert_eq!(m.mean_x, 326.0);
    assert!((m.mean_y - 102.6).abs() < 1e-3);
    assert!((m.ratio - 0.314723).abs() < 1e-6);
}

#[test]
fn orchard_moments_match_direct_summation() {
    let m = datasets::orchards().validate().unwrap().moments().unwrap();
    let rows = [
        (985.0, 6.0, 74775.47),
        (2196.0, 8.0, 259113.7),
        (1020.0, 11.0, 65885.6),
    ];
    assert!(rel(m.var_ybar, weighted_sum(&rows)) < 1e-13);
    assert!(rel(m.var_ybar, 9848.340971836957) < 1e-12);
    assert!(rel(m.var_ybar, 9844.9203) < 5e-3);
    assert!(rel(m.ratio, 49.03) < 1e-3);
}

#[test]
fn synthesized_stratum_round_trips() {
    let design = datasets::sugarcane().validate().unwrap();
    let pop = synthesize_population(&design, 2024).unwrap();
    let s = summarize_stratum(&pop.strata[0], 1, 3).unwrap();
    assert!(rel(s.var_y, 80.0) < 1e-9);
    assert!(rel(s.var_x, 2706.666) < 1e-9);
    assert!((s.correlation() - 0.9455626).abs() < 1e-9);
    assert_eq!(s.population_size, 6);
}

#[test]
fn microdata_and_summary_paths_agree_bit_for_bit() {
    let design = datasets::sugarcane().validate().unwrap();
    let pop = synthesize_population(&design, 3).unwrap();
    let data = Microdata {
        labels: vec!["1".into(), "2".into(), "3".into()],
        strata: pop.strata.clone(),
    };
    let via_microdata = data
        .summarize("m", &[3, 4, 3])
        .unwrap()
        .validate()
        .unwrap()
        .moments()
        .unwrap();
    let summaries: Vec<StratumSummary> = pop
        .strata
        .iter()
        .zip([3, 4, 3])
        .enumerate()
        .map(|(i, (u, n))| summarize_stratum(u, i + 1, n).unwrap())
        .collect();
    let direct = DesignSummary::new("s", summaries)
        .validate()
        .unwrap()
        .moments()
        .unwrap();
    assert_eq!(via_microdata, direct);
}

fn arb_stratum() -> impl Strategy<Value = (u64, u64, f64, f64, f64, f64, f64)> {
    (
        2u64..200,
        1.0f64..100.0,
        0.0f64..500.0,
        0.0f64..500.0,
        -1.0f64..=1.0,
    )
        .prop_flat_map(|(big_n, my, vy, vx, rho)| {
            (
                Just(big_n),
                1..=big_n,
                Just(my),
                1.0f64..100.0,
                Just(vy),
                Just(vx),
                Just(rho),
            )
        })
}

fn build(rows: &[(u64, u64, f64, f64, f64, f64, f64)], scale_vy: f64) -> CombinedMoments {
    let strata = rows
        .iter()
        .enumerate()
        .map(|(i, &(big_n, n, my, mx, vy, vx, rho))| {
            StratumSummary::with_correlation(i + 1, big_n, n, my, mx, vy * scale_vy, vx, rho)
        })
        .collect();
    DesignSummary::new("p", strata)
        .validate()
        .unwrap()
        .moments()
        .unwrap()
}

proptest! {
    #[test]
    fn var_ybar_is_linear_in_stratum_variances(rows in prop::collection::vec(arb_stratum(), 1..6)) {
        let base = build(&rows, 1.0);
        let doubled: Vec<_> = rows.iter().map(|r| (r.0, r.1, r.2, r.3, r.4 * 2.0, r.5, r.6)).collect();
        let doubled = build(&doubled, 1.0);
        prop_assert_eq!(doubled.var_ybar, 2.0 * base.var_ybar);
    }

    #[test]
    fn combined_covariance_obeys_cauchy_schwarz(rows in prop::collection::vec(arb_stratum(), 1..6)) {
        let m = build(&rows, 1.0);
        prop_assert!(m.var_ybar >= 0.0 && m.var_xbar >= 0.0);
        let bound = (m.var_ybar * m.var_xbar).sqrt();
        prop_assert!(m.cov_xybar.abs() <= bound * (1.0 + 1e-12) + 1e-300);
    }
}
