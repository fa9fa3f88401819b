//! Stratified design data model and population moments.
//!
//! A [`DesignSummary`] holds per-stratum sizes, means, variances and the
//! x/y covariance (all with divisor `N_h - 1`). Validation produces a
//! [`ValidatedDesign`] carrying the stratum weights `W_h = N_h / N` and the
//! finite population corrections `γ_h = 1/n_h - 1/N_h`, from which
//! [`aggregate_moments`] builds the [`CombinedMoments`] every estimator and
//! MSE formula in this crate works from.

use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute tolerance on `Σ W_h = 1`.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;
/// Slack allowed on `|ρ_h| ≤ 1` for inputs rounded to printed digits.
pub const CORRELATION_TOLERANCE: f64 = 1e-9;

/// Population summary of one stratum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StratumSummary {
    /// 1-based stratum index `h`; strata are summed in ascending order.
    pub index: usize,
    pub population_size: u64,
    pub sample_size: u64,
    pub mean_y: f64,
    pub mean_x: f64,
    pub var_y: f64,
    pub var_x: f64,
    pub cov_xy: f64,
}

impl StratumSummary {
    /// Builds a stratum from a correlation instead of a covariance,
    /// using `S_hxy = ρ_h · S_hx · S_hy`.
    #[allow(clippy::too_many_arguments)]
    pub fn with_correlation(
        index: usize,
        population_size: u64,
        sample_size: u64,
        mean_y: f64,
        mean_x: f64,
        var_y: f64,
        var_x: f64,
        rho: f64,
    ) -> Self {
        let cov_xy = rho * var_x.max(0.0).sqrt() * var_y.max(0.0).sqrt();
        StratumSummary {
            index,
            population_size,
            sample_size,
            mean_y,
            mean_x,
            var_y,
            var_x,
            cov_xy,
        }
    }

    /// Finite population correction `1/n_h - 1/N_h`.
    pub fn fpc(&self) -> f64 {
        if self.sample_size == self.population_size {
            return 0.0;
        }
        1.0 / self.sample_size as f64 - 1.0 / self.population_size as f64
    }

    /// Correlation `S_hxy / (S_hx S_hy)`; zero when either variate is constant.
    pub fn correlation(&self) -> f64 {
        let denom = (self.var_x * self.var_y).sqrt();
        if denom > 0.0 {
            self.cov_xy / denom
        } else {
            0.0
        }
    }

    /// Relative standard deviation of x, `S_hx / X̄`.
    pub fn cv_x(&self, mean_x: f64) -> f64 {
        self.var_x.sqrt() / mean_x
    }

    /// Relative standard deviation of y, `S_hy / Ȳ`.
    pub fn cv_y(&self, mean_y: f64) -> f64 {
        self.var_y.sqrt() / mean_y
    }

    fn check(&self) -> Result<()> {
        let stratum = self.index;
        if self.population_size == 0 || self.sample_size == 0 {
            return Err(Error::NonPositiveCount { stratum });
        }
        if self.sample_size > self.population_size {
            return Err(Error::SampleExceedsStratum {
                stratum,
                sample: self.sample_size,
                population: self.population_size,
            });
        }
        let values = [
            self.mean_y,
            self.mean_x,
            self.var_y,
            self.var_x,
            self.cov_xy,
        ];
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { stratum });
        }
        if self.var_y < 0.0 {
            return Err(Error::NegativeVariance {
                stratum,
                variate: 'y',
            });
        }
        if self.var_x < 0.0 {
            return Err(Error::NegativeVariance {
                stratum,
                variate: 'x',
            });
        }
        let bound = (self.var_x * self.var_y).sqrt();
        if self.cov_xy.abs() > bound * (1.0 + CORRELATION_TOLERANCE) + f64::MIN_POSITIVE {
            let rho = if bound > 0.0 {
                self.cov_xy / bound
            } else {
                f64::INFINITY.copysign(self.cov_xy)
            };
            return Err(Error::CorrelationOutOfRange { stratum, rho });
        }
        Ok(())
    }
}

/// An unvalidated stratified design.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignSummary {
    pub label: String,
    /// Externally known auxiliary mean; overrides `Σ W_h X̄_h` when present.
    pub known_mean_x: Option<f64>,
    pub strata: Vec<StratumSummary>,
}

impl DesignSummary {
    pub fn new(label: impl Into<String>, strata: Vec<StratumSummary>) -> Self {
        DesignSummary {
            label: label.into(),
            known_mean_x: None,
            strata,
        }
    }

    pub fn with_known_mean_x(mut self, mean_x: f64) -> Self {
        self.known_mean_x = Some(mean_x);
        self
    }

    pub fn validate(&self) -> Result<ValidatedDesign> {
        validate_design(self)
    }
}

/// A design whose invariants have been checked, with derived per-stratum
/// quantities. Strata are stored in ascending index order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidatedDesign {
    pub label: String,
    pub known_mean_x: Option<f64>,
    pub strata: Vec<StratumSummary>,
    pub weights: Vec<f64>,
    pub fpcs: Vec<f64>,
    pub correlations: Vec<f64>,
}

impl ValidatedDesign {
    pub fn population_size(&self) -> u64 {
        self.strata.iter().map(|s| s.population_size).sum()
    }

    pub fn sample_size(&self) -> u64 {
        self.strata.iter().map(|s| s.sample_size).sum()
    }

    pub fn sample_sizes(&self) -> Vec<usize> {
        self.strata.iter().map(|s| s.sample_size as usize).collect()
    }

    pub fn moments(&self) -> Result<CombinedMoments> {
        aggregate_moments(self)
    }
}

pub fn validate_design(design: &DesignSummary) -> Result<ValidatedDesign> {
    if design.strata.is_empty() {
        return Err(Error::NoStrata);
    }
    let mut strata = design.strata.clone();
    strata.sort_by_key(|s| s.index);
    for pair in strata.windows(2) {
        if pair[0].index == pair[1].index {
            return Err(Error::DuplicateStratum {
                stratum: pair[0].index,
            });
        }
    }
    for stratum in &strata {
        stratum.check()?;
    }
    if let Some(mean_x) = design.known_mean_x {
        if !mean_x.is_finite() {
            return Err(Error::NonFinite { stratum: 0 });
        }
    }

    let total = strata.iter().map(|s| s.population_size).sum::<u64>() as f64;
    let weights: Vec<f64> = strata
        .iter()
        .map(|s| s.population_size as f64 / total)
        .collect();
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
        return Err(Error::WeightSumViolation { sum });
    }

    Ok(ValidatedDesign {
        label: design.label.clone(),
        known_mean_x: design.known_mean_x,
        fpcs: strata.iter().map(StratumSummary::fpc).collect(),
        correlations: strata.iter().map(StratumSummary::correlation).collect(),
        weights,
        strata,
    })
}

/// Population-level moments of the stratified sample means.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CombinedMoments {
    /// `Ȳ`
    pub mean_y: f64,
    /// `X̄`
    pub mean_x: f64,
    /// `R = Ȳ / X̄`
    pub ratio: f64,
    /// `v(ȳ_st) = Σ W_h² γ_h S²_hy`
    pub var_ybar: f64,
    /// `v(x̄_st) = Σ W_h² γ_h S²_hx`
    pub var_xbar: f64,
    /// `cov(ȳ_st, x̄_st) = Σ W_h² γ_h S_hxy`
    pub cov_xybar: f64,
}

impl CombinedMoments {
    /// Builds moments directly, deriving the ratio from the two means.
    pub fn new(
        mean_y: f64,
        mean_x: f64,
        var_ybar: f64,
        var_xbar: f64,
        cov_xybar: f64,
    ) -> Result<Self> {
        if mean_x == 0.0 {
            return Err(Error::ZeroAuxiliaryMean);
        }
        Ok(CombinedMoments {
            mean_y,
            mean_x,
            ratio: mean_y / mean_x,
            var_ybar,
            var_xbar,
            cov_xybar,
        })
    }

    /// Relative variance `v(x̄_st) / X̄²`.
    pub fn rel_var_x(&self) -> f64 {
        self.var_xbar / (self.mean_x * self.mean_x)
    }

    /// Relative variance `v(ȳ_st) / Ȳ²`.
    pub fn rel_var_y(&self) -> f64 {
        self.var_ybar / (self.mean_y * self.mean_y)
    }

    /// Relative covariance `cov(ȳ_st, x̄_st) / (Ȳ X̄)`.
    pub fn rel_cov(&self) -> f64 {
        self.cov_xybar / (self.mean_y * self.mean_x)
    }
}

pub fn aggregate_moments(design: &ValidatedDesign) -> Result<CombinedMoments> {
    let mut mean_y = 0.0;
    let mut mean_x = 0.0;
    let mut var_ybar = 0.0;
    let mut var_xbar = 0.0;
    let mut cov_xybar = 0.0;
    for ((stratum, &w), &fpc) in design.strata.iter().zip(&design.weights).zip(&design.fpcs) {
        let scale = w * w * fpc;
        mean_y += w * stratum.mean_y;
        mean_x += w * stratum.mean_x;
        var_ybar += scale * stratum.var_y;
        var_xbar += scale * stratum.var_x;
        cov_xybar += scale * stratum.cov_xy;
    }
    let mean_x = design.known_mean_x.unwrap_or(mean_x);
    CombinedMoments::new(mean_y, mean_x, var_ybar, var_xbar, cov_xybar)
}

/// Unit values of one stratum.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct StratumUnits {
    pub y: Vec<f64>,
    pub x: Vec<f64>,
}

impl StratumUnits {
    pub fn new(y: Vec<f64>, x: Vec<f64>) -> Self {
        assert_eq!(y.len(), x.len(), "y and x must have equal length");
        StratumUnits { y, x }
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn push(&mut self, y: f64, x: f64) {
        self.y.push(y);
        self.x.push(x);
    }
}

/// Full unit-level data for every stratum, in stratum order.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Microdata {
    pub labels: Vec<String>,
    pub strata: Vec<StratumUnits>,
}

impl Microdata {
    /// Summarizes every stratum with the given per-stratum sample sizes.
    pub fn summarize(&self, label: &str, sample_sizes: &[u64]) -> Result<DesignSummary> {
        if self.strata.is_empty() {
            return Err(Error::NoStrata);
        }
        if sample_sizes.len() != self.strata.len() {
            return Err(Error::StratumCountMismatch {
                expected: self.strata.len(),
                got: sample_sizes.len(),
            });
        }
        let strata = self
            .strata
            .iter()
            .zip(sample_sizes)
            .enumerate()
            .map(|(i, (units, &n))| summarize_stratum(units, i + 1, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(DesignSummary::new(label, strata))
    }
}

/// Computes population means, variances and covariance of one stratum
/// with divisor `N_h - 1`.
pub fn summarize_stratum(
    units: &StratumUnits,
    index: usize,
    sample_size: u64,
) -> Result<StratumSummary> {
    let count = units.len();
    if count < 2 {
        return Err(Error::DegenerateStratum {
            stratum: index,
            units: count,
        });
    }
    if units.y.iter().chain(&units.x).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { stratum: index });
    }
    let n = count as f64;
    let mean_y = units.y.iter().sum::<f64>() / n;
    let mean_x = units.x.iter().sum::<f64>() / n;
    let (mut syy, mut sxx, mut sxy) = (0.0, 0.0, 0.0);
    for (&y, &x) in units.y.iter().zip(&units.x) {
        let dy = y - mean_y;
        let dx = x - mean_x;
        syy += dy * dy;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    let divisor = n - 1.0;
    Ok(StratumSummary {
        index,
        population_size: count as u64,
        sample_size,
        mean_y,
        mean_x,
        var_y: syy / divisor,
        var_x: sxx / divisor,
        cov_xy: sxy / divisor,
    })
}
