//! Simulation oracle for the first-order formulas.
//!
//! [`synthesize_population`] builds a finite population whose stratum
//! moments equal a target design exactly. [`replicate`] draws seeded
//! stratified SRSWOR samples from it and [`enumerate_exhaustive`] visits
//! every possible sample; both report empirical bias and MSE next to the
//! theoretical values from [`crate::mse`].
//!
//! Replications are split into fixed-size batches, each with its own ChaCha
//! stream, and batch results are merged in batch order. Reports are
//! therefore identical for any rayon thread count.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::design::{CombinedMoments, Microdata, StratumUnits, ValidatedDesign};
use crate::error::{Error, Result};
use crate::estimators::{EstimatorSpec, ResolvedEstimator, SampleStats};
use crate::mse::{self, ResolvedConstants};

/// Replications per RNG stream.
pub const BATCH_SIZE: usize = 1024;
/// Largest sample space [`enumerate_exhaustive`] will visit.
pub const ENUMERATION_LIMIT: f64 = 1e7;
/// Stream offset keeping replication streams apart from synthesis streams.
const REPLICATION_STREAM_BASE: u64 = 1 << 63;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub generator: String,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FinitePopulation {
    pub label: String,
    pub strata: Vec<StratumUnits>,
    pub provenance: Provenance,
}

impl FinitePopulation {
    pub fn from_microdata(label: &str, data: &Microdata) -> Self {
        FinitePopulation {
            label: label.to_string(),
            strata: data.strata.clone(),
            provenance: Provenance {
                generator: "microdata".to_string(),
                seed: None,
            },
        }
    }

    pub fn size(&self) -> usize {
        self.strata.iter().map(StratumUnits::len).sum()
    }

    pub fn weights(&self) -> Vec<f64> {
        let total = self.size() as f64;
        self.strata.iter().map(|s| s.len() as f64 / total).collect()
    }

    /// Stratum summaries of this population with the given sample sizes.
    pub fn design(&self, sample_sizes: &[usize]) -> Result<ValidatedDesign> {
        let data = Microdata {
            labels: Vec::new(),
            strata: self.strata.clone(),
        };
        let sizes: Vec<u64> = sample_sizes.iter().map(|&n| n as u64).collect();
        data.summarize(&self.label, &sizes)?.validate()
    }

    fn check_sizes(&self, sample_sizes: &[usize]) -> Result<()> {
        if sample_sizes.len() != self.strata.len() {
            return Err(Error::StratumCountMismatch {
                expected: self.strata.len(),
                got: sample_sizes.len(),
            });
        }
        for (h, (units, &n)) in self.strata.iter().zip(sample_sizes).enumerate() {
            if n == 0 {
                return Err(Error::NonPositiveCount { stratum: h + 1 });
            }
            if n > units.len() {
                return Err(Error::SampleExceedsStratum {
                    stratum: h + 1,
                    sample: n as u64,
                    population: units.len() as u64,
                });
            }
        }
        Ok(())
    }
}

/// Generates a population whose stratum means, variances and covariance
/// (divisor `N_h - 1`) equal those of `targets`.
///
/// Bivariate normal draws are centered, whitened to identity sample
/// covariance, then mapped through the Cholesky factor of the target.
pub fn synthesize_population(targets: &ValidatedDesign, seed: u64) -> Result<FinitePopulation> {
    let strata = targets
        .strata
        .iter()
        .enumerate()
        .map(|(h, target)| {
            let size = target.population_size as usize;
            if size < 3 {
                return Err(Error::DegenerateStratum {
                    stratum: target.index,
                    units: size,
                });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(h as u64);
            let (u1, u2) = whitened_pair(&mut rng, size);

            let sd_y = target.var_y.sqrt();
            let sd_x = target.var_x.sqrt();
            let mut rho = target.correlation();
            if rho.abs() > 1.0 + crate::design::CORRELATION_TOLERANCE {
                return Err(Error::InfeasibleMoments {
                    stratum: target.index,
                });
            }
            rho = rho.clamp(-1.0, 1.0);
            let residual = (1.0 - rho * rho).max(0.0).sqrt();

            let mut units = StratumUnits::default();
            for (&a, &b) in u1.iter().zip(&u2) {
                let (y, x) = if sd_y > 0.0 {
                    (
                        target.mean_y + sd_y * a,
                        target.mean_x + sd_x * (rho * a + residual * b),
                    )
                } else {
                    (target.mean_y, target.mean_x + sd_x * a)
                };
                units.push(y, x);
            }
            Ok(units)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FinitePopulation {
        label: targets.label.clone(),
        strata,
        provenance: Provenance {
            generator: "bivariate-normal, moment-matched".to_string(),
            seed: Some(seed),
        },
    })
}

/// Two centered sequences with unit sample variance and zero sample
/// covariance.
fn whitened_pair(rng: &mut ChaCha8Rng, size: usize) -> (Vec<f64>, Vec<f64>) {
    let divisor = (size - 1) as f64;
    loop {
        let mut z1: Vec<f64> = (0..size).map(|_| rng.sample(StandardNormal)).collect();
        let mut z2: Vec<f64> = (0..size).map(|_| rng.sample(StandardNormal)).collect();
        center(&mut z1);
        center(&mut z2);
        let s11 = dot(&z1, &z1) / divisor;
        let s12 = dot(&z1, &z2) / divisor;
        let s22 = dot(&z2, &z2) / divisor;
        let l11 = s11.sqrt();
        let l21 = s12 / l11;
        let l22_sq = s22 - l21 * l21;
        if !(l11 > 0.0 && l22_sq > 1e-12 * s22) {
            continue;
        }
        let l22 = l22_sq.sqrt();
        let u1: Vec<f64> = z1.iter().map(|v| v / l11).collect();
        let u2: Vec<f64> = z2
            .iter()
            .zip(&u1)
            .map(|(v, u)| (v - l21 * u) / l22)
            .collect();
        return (u1, u2);
    }
}

fn center(values: &mut [f64]) {
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    values.iter_mut().for_each(|v| *v -= mean);
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn draw_with<R: Rng>(
    pop: &FinitePopulation,
    sample_sizes: &[usize],
    weights: &[f64],
    rng: &mut R,
) -> SampleStats {
    let (mut ybar, mut xbar) = (0.0, 0.0);
    let mut strata = Vec::with_capacity(pop.strata.len());
    for ((units, &n), &w) in pop.strata.iter().zip(sample_sizes).zip(weights) {
        let (mut sy, mut sx) = (0.0, 0.0);
        for i in index::sample(rng, units.len(), n) {
            sy += units.y[i];
            sx += units.x[i];
        }
        let (my, mx) = (sy / n as f64, sx / n as f64);
        ybar += w * my;
        xbar += w * mx;
        strata.push((my, mx));
    }
    SampleStats {
        ybar_st: ybar,
        xbar_st: xbar,
        strata,
    }
}

/// Draws one stratified simple random sample without replacement.
pub fn draw_stratified_srswor(
    pop: &FinitePopulation,
    sample_sizes: &[usize],
    seed: u64,
) -> Result<SampleStats> {
    pop.check_sizes(sample_sizes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(draw_with(pop, sample_sizes, &pop.weights(), &mut rng))
}

/// Tolerances used to judge empirical against theoretical values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AgreementPolicy {
    /// MSE agrees within `max(mse_se_multiple · SE, mse_relative · theory)`.
    pub mse_se_multiple: f64,
    pub mse_relative: f64,
    /// Bias agrees within `max(bias_se_multiple · SE, bias_scale_fraction · sqrt(v(ȳ_st)))`.
    pub bias_se_multiple: f64,
    pub bias_scale_fraction: f64,
    /// Replications below this produce no verdict.
    pub min_replications: u64,
}

impl Default for AgreementPolicy {
    fn default() -> Self {
        AgreementPolicy {
            mse_se_multiple: 3.0,
            mse_relative: 0.05,
            bias_se_multiple: 3.0,
            bias_scale_fraction: 0.1,
            min_replications: 1000,
        }
    }
}

impl AgreementPolicy {
    pub fn mse_tolerance(&self, se: f64, theory: f64) -> f64 {
        (self.mse_se_multiple * se).max(self.mse_relative * theory.abs())
    }

    pub fn bias_tolerance(&self, se: f64, var_ybar: f64) -> f64 {
        (self.bias_se_multiple * se).max(self.bias_scale_fraction * var_ybar.sqrt())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalRow {
    pub estimator: ResolvedEstimator,
    pub constants: ResolvedConstants,
    /// Samples on which the estimator was defined.
    pub replications: u64,
    /// Samples on which evaluation failed (e.g. a zero denominator).
    pub failures: u64,
    pub empirical_mean: f64,
    pub empirical_bias: f64,
    pub bias_se: f64,
    pub empirical_mse: f64,
    pub mse_se: f64,
    pub theoretical_bias: f64,
    pub theoretical_mse: f64,
    pub bias_agrees: Option<bool>,
    pub mse_agrees: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Replication,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalReport {
    pub label: String,
    pub method: Method,
    pub samples: u64,
    pub seed: Option<u64>,
    pub sample_sizes: Vec<usize>,
    pub moments: CombinedMoments,
    pub policy: AgreementPolicy,
    pub rows: Vec<EmpiricalRow>,
}

impl EmpiricalReport {
    /// False if any verdict failed; rows without a verdict do not count.
    pub fn all_agree(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.mse_agrees != Some(false) && r.bias_agrees != Some(false))
    }
}

/// Running mean and sum of squared deviations, mergeable across batches.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Running {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Running {
    fn push(&mut self, value: f64) {
        self.count += 1;
        let delta = value - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (value - self.mean);
    }

    fn merge(&mut self, other: &Running) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let total = self.count + other.count;
        let delta = other.mean - self.mean;
        let weight = other.count as f64 / total as f64;
        self.mean += delta * weight;
        self.m2 += other.m2 + delta * delta * self.count as f64 * weight;
        self.count = total;
    }

    /// Variance with divisor `count`.
    #[cfg(test)]
    fn population_variance(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.m2 / self.count as f64
        }
    }

    /// Standard error of the mean from the sample variance.
    fn standard_error(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64 / self.count as f64).sqrt()
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    errors: Running,
    squared: Running,
    failures: u64,
}

impl Tally {
    fn record(&mut self, estimate: Result<f64>, mean_y: f64) {
        match estimate {
            Ok(t) if t.is_finite() => {
                let e = t - mean_y;
                self.errors.push(e);
                self.squared.push(e * e);
            }
            _ => self.failures += 1,
        }
    }

    fn merge(&mut self, other: &Tally) {
        self.errors.merge(&other.errors);
        self.squared.merge(&other.squared);
        self.failures += other.failures;
    }
}

struct Setup {
    weights: Vec<f64>,
    moments: CombinedMoments,
    estimators: Vec<ResolvedEstimator>,
}

fn setup(pop: &FinitePopulation, sample_sizes: &[usize], specs: &[EstimatorSpec]) -> Result<Setup> {
    pop.check_sizes(sample_sizes)?;
    let moments = pop.design(sample_sizes)?.moments()?;
    let estimators = specs
        .iter()
        .map(|spec| mse::resolve(spec, &moments).map(|(e, _)| e))
        .collect::<Result<Vec<_>>>()?;
    Ok(Setup {
        weights: pop.weights(),
        moments,
        estimators,
    })
}

fn tally_sample(tallies: &mut [Tally], setup: &Setup, stats: &SampleStats) {
    for (tally, est) in tallies.iter_mut().zip(&setup.estimators) {
        tally.record(
            est.estimate(stats, setup.moments.mean_x),
            setup.moments.mean_y,
        );
    }
}

fn finish(
    pop: &FinitePopulation,
    setup: Setup,
    tallies: Vec<Tally>,
    method: Method,
    samples: u64,
    seed: Option<u64>,
    sample_sizes: &[usize],
) -> Result<EmpiricalReport> {
    let policy = AgreementPolicy::default();
    let m = setup.moments;
    let judged = method == Method::Exhaustive || samples >= policy.min_replications;
    let rows = setup
        .estimators
        .iter()
        .zip(tallies)
        .map(|(est, tally)| {
            let theory = mse::evaluate_resolved(est, &m);
            let (theoretical_mse, theoretical_bias) = match theory {
                Ok(r) => (r.mse, r.bias),
                // Zero MSE only breaks the efficiency ratio.
                Err(Error::ZeroMse) => (0.0, mse::first_order_bias(est, &m)),
                Err(e) => return Err(e),
            };
            let (bias_se, mse_se) = match method {
                Method::Replication => (
                    tally.errors.standard_error(),
                    tally.squared.standard_error(),
                ),
                Method::Exhaustive => (0.0, 0.0),
            };
            let empirical_bias = tally.errors.mean;
            let empirical_mse = tally.squared.mean;
            let usable = judged && tally.errors.count > 0;
            Ok(EmpiricalRow {
                estimator: *est,
                constants: ResolvedConstants::of(est),
                replications: tally.errors.count,
                failures: tally.failures,
                empirical_mean: m.mean_y + empirical_bias,
                empirical_bias,
                bias_se,
                empirical_mse,
                mse_se,
                theoretical_bias,
                theoretical_mse,
                bias_agrees: usable.then(|| {
                    (empirical_bias - theoretical_bias).abs()
                        <= policy.bias_tolerance(bias_se, m.var_ybar)
                }),
                mse_agrees: usable.then(|| {
                    (empirical_mse - theoretical_mse).abs()
                        <= policy.mse_tolerance(mse_se, theoretical_mse)
                }),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EmpiricalReport {
        label: pop.label.clone(),
        method,
        samples,
        seed,
        sample_sizes: sample_sizes.to_vec(),
        moments: m,
        policy,
        rows,
    })
}

/// Runs `reps` seeded stratified SRSWOR replications and compares every
/// estimator's empirical bias and MSE with first-order theory.
///
/// Estimator failures on individual samples are counted per row.
pub fn replicate(
    pop: &FinitePopulation,
    sample_sizes: &[usize],
    specs: &[EstimatorSpec],
    reps: u64,
    seed: u64,
) -> Result<EmpiricalReport> {
    let setup = setup(pop, sample_sizes, specs)?;
    let batches = reps.div_ceil(BATCH_SIZE as u64);
    let partials: Vec<Vec<Tally>> = (0..batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(REPLICATION_STREAM_BASE + batch);
            let start = batch * BATCH_SIZE as u64;
            let count = (reps - start).min(BATCH_SIZE as u64);
            let mut tallies = vec![Tally::default(); setup.estimators.len()];
            for _ in 0..count {
                let stats = draw_with(pop, sample_sizes, &setup.weights, &mut rng);
                tally_sample(&mut tallies, &setup, &stats);
            }
            tallies
        })
        .collect();
    let mut tallies = vec![Tally::default(); setup.estimators.len()];
    for partial in &partials {
        for (total, part) in tallies.iter_mut().zip(partial) {
            total.merge(part);
        }
    }
    finish(
        pop,
        setup,
        tallies,
        Method::Replication,
        reps,
        Some(seed),
        sample_sizes,
    )
}

/// `Π_h C(N_h, n_h)`, as a float since it overflows quickly.
pub fn combination_count(pop: &FinitePopulation, sample_sizes: &[usize]) -> f64 {
    pop.strata
        .iter()
        .zip(sample_sizes)
        .map(|(units, &n)| binomial(units.len(), n))
        .product()
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Sample means of every `k`-subset of a stratum, in lexicographic order.
fn subset_means(units: &StratumUnits, k: usize) -> Vec<(f64, f64)> {
    let n = units.len();
    let mut idx: Vec<usize> = (0..k).collect();
    let mut out = Vec::new();
    loop {
        let (sy, sx) = idx.iter().fold((0.0, 0.0), |(sy, sx), &i| {
            (sy + units.y[i], sx + units.x[i])
        });
        out.push((sy / k as f64, sx / k as f64));
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Evaluates every estimator on every possible stratified sample. The
/// report's empirical values are exact design expectations.
pub fn enumerate_exhaustive(
    pop: &FinitePopulation,
    sample_sizes: &[usize],
    specs: &[EstimatorSpec],
) -> Result<EmpiricalReport> {
    let setup = setup(pop, sample_sizes, specs)?;
    let count = combination_count(pop, sample_sizes);
    if count > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge {
            count,
            limit: ENUMERATION_LIMIT,
        });
    }
    let per_stratum: Vec<Vec<(f64, f64)>> = pop
        .strata
        .iter()
        .zip(sample_sizes)
        .map(|(units, &n)| subset_means(units, n))
        .collect();
    let mut tallies = vec![Tally::default(); setup.estimators.len()];
    let mut odometer = vec![0usize; per_stratum.len()];
    let mut samples = 0u64;
    loop {
        let (mut ybar, mut xbar) = (0.0, 0.0);
        for ((means, &i), &w) in per_stratum.iter().zip(&odometer).zip(&setup.weights) {
            ybar += w * means[i].0;
            xbar += w * means[i].1;
        }
        tally_sample(&mut tallies, &setup, &SampleStats::new(ybar, xbar));
        samples += 1;

        let mut h = odometer.len();
        loop {
            if h == 0 {
                return finish(
                    pop,
                    setup,
                    tallies,
                    Method::Exhaustive,
                    samples,
                    None,
                    sample_sizes,
                );
            }
            h -= 1;
            odometer[h] += 1;
            if odometer[h] < per_stratum[h].len() {
                break;
            }
            odometer[h] = 0;
        }
    }
}

/// Exact design variance of `ȳ_st` over all samples (divisor = sample count).
pub fn exhaustive_variance_of_mean(pop: &FinitePopulation, sample_sizes: &[usize]) -> Result<f64> {
    let spec = EstimatorSpec::new(crate::estimators::EstimatorKind::Unbiased);
    let report = enumerate_exhaustive(pop, sample_sizes, &[spec])?;
    Ok(report.rows[0].empirical_mse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{summarize_stratum, DesignSummary, StratumSummary};

    fn small_design() -> ValidatedDesign {
        DesignSummary::new(
            "small",
            vec![
                StratumSummary::with_correlation(
                    1, 6, 3, 135.0, 366.666, 80.0, 2706.666, 0.9455626,
                ),
                StratumSummary::with_correlation(2, 5, 2, 40.0, 90.0, 12.0, 30.0, -0.4),
            ],
        )
        .validate()
        .unwrap()
    }

    #[test]
    fn synthesis_matches_target_moments() {
        let design = small_design();
        let pop = synthesize_population(&design, 11).unwrap();
        for (units, target) in pop.strata.iter().zip(&design.strata) {
            let got = summarize_stratum(units, target.index, target.sample_size).unwrap();
            let scale = (target.var_x * target.var_y).sqrt();
            assert!((got.mean_y - target.mean_y).abs() <= 1e-9 * target.mean_y.abs());
            assert!((got.mean_x - target.mean_x).abs() <= 1e-9 * target.mean_x.abs());
            assert!((got.var_y - target.var_y).abs() <= 1e-9 * target.var_y);
            assert!((got.var_x - target.var_x).abs() <= 1e-9 * target.var_x);
            assert!((got.cov_xy - target.cov_xy).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn synthesis_is_deterministic_per_seed() {
        let design = small_design();
        let a = synthesize_population(&design, 5).unwrap();
        let b = synthesize_population(&design, 5).unwrap();
        let c = synthesize_population(&design, 6).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.strata, c.strata);
    }

    #[test]
    fn perfect_correlation_is_affine() {
        let design = DesignSummary::new(
            "line",
            vec![StratumSummary::with_correlation(
                1, 8, 2, 10.0, 5.0, 4.0, 9.0, 1.0,
            )],
        )
        .validate()
        .unwrap();
        let pop = synthesize_population(&design, 3).unwrap();
        let units = &pop.strata[0];
        for (&y, &x) in units.y.iter().zip(&units.x) {
            // x - 5 = 1.5 (y - 10)
            assert!(((x - 5.0) - 1.5 * (y - 10.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn tiny_strata_cannot_be_synthesized() {
        let design = DesignSummary::new(
            "tiny",
            vec![StratumSummary::with_correlation(
                1, 2, 1, 1.0, 1.0, 1.0, 1.0, 0.0,
            )],
        )
        .validate()
        .unwrap();
        assert_eq!(
            synthesize_population(&design, 0).unwrap_err(),
            Error::DegenerateStratum {
                stratum: 1,
                units: 2
            }
        );
    }

    #[test]
    fn census_sample_recovers_population_means() {
        let design = small_design();
        let pop = synthesize_population(&design, 1).unwrap();
        let m = pop.design(&[6, 5]).unwrap().moments().unwrap();
        let s = draw_stratified_srswor(&pop, &[6, 5], 99).unwrap();
        assert!((s.ybar_st - m.mean_y).abs() < 1e-9);
        assert!((s.xbar_st - m.mean_x).abs() < 1e-9);
    }

    #[test]
    fn oversized_draw_is_rejected() {
        let pop = synthesize_population(&small_design(), 1).unwrap();
        assert!(matches!(
            draw_stratified_srswor(&pop, &[7, 2], 0).unwrap_err(),
            Error::SampleExceedsStratum { stratum: 1, .. }
        ));
    }

    #[test]
    fn single_unit_draws_are_weighted_units() {
        let pop = synthesize_population(&small_design(), 4).unwrap();
        let s = draw_stratified_srswor(&pop, &[1, 1], 8).unwrap();
        let w = pop.weights();
        let (y1, _) = s.strata[0];
        let (y2, _) = s.strata[1];
        assert!(pop.strata[0].y.contains(&y1));
        assert!(pop.strata[1].y.contains(&y2));
        assert!((s.ybar_st - (w[0] * y1 + w[1] * y2)).abs() < 1e-12);
    }

    #[test]
    fn subsets_are_enumerated_once() {
        let units = StratumUnits::new((0..6).map(f64::from).collect(), vec![0.0; 6]);
        let means = subset_means(&units, 3);
        assert_eq!(means.len(), 20);
        let mut sums: Vec<i64> = means.iter().map(|m| (m.0 * 3.0).round() as i64).collect();
        sums.sort();
        // subset sums of {0..5} choose 3 range over 3..=12
        assert_eq!(sums.first(), Some(&3));
        assert_eq!(sums.last(), Some(&12));
        assert_eq!(binomial(12, 4), 495.0);
    }

    #[test]
    fn running_merge_matches_sequential() {
        let values: Vec<f64> = (0..100).map(|i| (i as f64 * 0.37).sin() * 10.0).collect();
        let mut all = Running::default();
        values.iter().for_each(|&v| all.push(v));
        let mut left = Running::default();
        let mut right = Running::default();
        values[..37].iter().for_each(|&v| left.push(v));
        values[37..].iter().for_each(|&v| right.push(v));
        left.merge(&right);
        assert!((left.mean - all.mean).abs() < 1e-12);
        assert!((left.population_variance() - all.population_variance()).abs() < 1e-10);
    }
}
