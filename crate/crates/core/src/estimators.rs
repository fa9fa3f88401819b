//! Point estimators of the population mean `Ȳ`.
//!
//! Baselines are the stratified mean `ȳ_st` and Hansen's combined ratio and
//! product estimators. The proposed families are
//!
//! * `t1 = ȳ_st [2 - (x̄_st/X̄)^w]`
//! * `t2 = ȳ_st [(x̄_st + a(X̄ - x̄_st)) / (x̄_st + b(X̄ - x̄_st))]^p`
//!
//! and the ratio-cum-difference combinations `t3..t6`, which mix either
//! shape factor with a difference term `k2 (X̄ - x̄_st)`, either inside the
//! scaled part (`t3`, `t4`) or added after it (`t5`, `t6`).

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::design::CombinedMoments;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorKind {
    Unbiased,
    CombinedRatio,
    CombinedProduct,
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
}

/// Which shape factor an estimator carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeFamily {
    /// No auxiliary adjustment.
    None,
    Ratio,
    Product,
    /// `2 - (x̄_st/X̄)^w`
    Power,
    /// `[(x̄_st + a d) / (x̄_st + b d)]^p` with `d = X̄ - x̄_st`
    Transform,
}

/// How the dual constants `(k1, k2)` enter an estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualLayout {
    /// Estimator has no dual constants.
    None,
    /// `[k1 ȳ_st + k2 d] · factor`
    Scaled,
    /// `k1 ȳ_st · factor + k2 d`
    Additive,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 9] = [
        EstimatorKind::T1,
        EstimatorKind::T2,
        EstimatorKind::T3,
        EstimatorKind::T4,
        EstimatorKind::T5,
        EstimatorKind::T6,
        EstimatorKind::CombinedRatio,
        EstimatorKind::CombinedProduct,
        EstimatorKind::Unbiased,
    ];

    pub fn family(self) -> ShapeFamily {
        use EstimatorKind::*;
        match self {
            Unbiased => ShapeFamily::None,
            CombinedRatio => ShapeFamily::Ratio,
            CombinedProduct => ShapeFamily::Product,
            T1 | T3 | T5 => ShapeFamily::Power,
            T2 | T4 | T6 => ShapeFamily::Transform,
        }
    }

    pub fn layout(self) -> DualLayout {
        use EstimatorKind::*;
        match self {
            T3 | T4 => DualLayout::Scaled,
            T5 | T6 => DualLayout::Additive,
            _ => DualLayout::None,
        }
    }

    pub fn has_duals(self) -> bool {
        self.layout() != DualLayout::None
    }

    /// The single-factor estimator `t3..t6` reduce to at `(k1, k2) = (1, 0)`.
    pub fn embedded(self) -> EstimatorKind {
        match self.family() {
            ShapeFamily::Power => EstimatorKind::T1,
            ShapeFamily::Transform => EstimatorKind::T2,
            _ => self,
        }
    }

    pub fn name(self) -> &'static str {
        use EstimatorKind::*;
        match self {
            Unbiased => "unbiased",
            CombinedRatio => "ratio",
            CombinedProduct => "product",
            T1 => "t1",
            T2 => "t2",
            T3 => "t3",
            T4 => "t4",
            T5 => "t5",
            T6 => "t6",
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownEstimator(pub String);

impl fmt::Display for UnknownEstimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown estimator `{}`", self.0)
    }
}

impl std::error::Error for UnknownEstimator {}

impl FromStr for EstimatorKind {
    type Err = UnknownEstimator;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        use EstimatorKind::*;
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "unbiased" | "ybar" | "mean" | "yst" => Unbiased,
            "ratio" | "rc" | "combined-ratio" => CombinedRatio,
            "product" | "pc" | "combined-product" => CombinedProduct,
            "t1" => T1,
            "t2" => T2,
            "t3" => T3,
            "t4" => T4,
            "t5" => T5,
            "t6" => T6,
            _ => return Err(UnknownEstimator(s.to_string())),
        })
    }
}

/// Shape constants of the `t1`/`t2` families.
///
/// `w` is used by the power family, `(p, a, b)` by the transform family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShapeParams {
    pub w: f64,
    pub p: f64,
    pub a: f64,
    pub b: f64,
}

impl Default for ShapeParams {
    /// `w = 1` and `(p, a, b) = (1, 1, 0)`: both families reduce to the
    /// combined ratio estimator.
    fn default() -> Self {
        ShapeParams {
            w: 1.0,
            p: 1.0,
            a: 1.0,
            b: 0.0,
        }
    }
}

impl ShapeParams {
    pub fn power(w: f64) -> Self {
        ShapeParams {
            w,
            ..Default::default()
        }
    }

    pub fn transform(p: f64, a: f64, b: f64) -> Self {
        ShapeParams {
            p,
            a,
            b,
            ..Default::default()
        }
    }

    /// `A = p(1 - a)`
    pub fn coef_a(&self) -> f64 {
        self.p * (1.0 - self.a)
    }

    /// `B = p(1 - b)`
    pub fn coef_b(&self) -> f64 {
        self.p * (1.0 - self.b)
    }

    /// `C = [p²(a-b)² + p(b² - a² + 2(a-b))] / 2`, the `e1²` coefficient
    /// of the transform factor.
    pub fn coef_c(&self) -> f64 {
        let (p, a, b) = (self.p, self.a, self.b);
        (p * p * (a - b) * (a - b) + p * (b * b - a * a + 2.0 * (a - b))) / 2.0
    }

    /// `Δ = p(b - a)`, the `e1` coefficient of the transform factor.
    pub fn delta(&self) -> f64 {
        self.p * (self.b - self.a)
    }

    /// `D' = p(a - b) = -Δ`
    pub fn d_prime(&self) -> f64 {
        self.p * (self.a - self.b)
    }
}

/// Second-order expansion `1 + linear·e1 + quadratic·e1²` of a shape factor
/// in `e1 = x̄_st/X̄ - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeExpansion {
    pub linear: f64,
    pub quadratic: f64,
}

impl ShapeExpansion {
    pub fn of(family: ShapeFamily, shape: &ShapeParams) -> Self {
        let (linear, quadratic) = match family {
            ShapeFamily::None => (0.0, 0.0),
            ShapeFamily::Ratio => (-1.0, 1.0),
            ShapeFamily::Product => (1.0, 0.0),
            ShapeFamily::Power => (-shape.w, -shape.w * (shape.w - 1.0) / 2.0),
            ShapeFamily::Transform => (shape.delta(), shape.coef_c()),
        };
        ShapeExpansion { linear, quadratic }
    }
}

/// Dual constants of `t3..t6`, either fixed or chosen to minimize the MSE.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Duals {
    Given { k1: f64, k2: f64 },
    Optimal,
}

impl Default for Duals {
    fn default() -> Self {
        Duals::Given { k1: 1.0, k2: 0.0 }
    }
}

/// Shape constants, either fixed or chosen to minimize the MSE.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Shape {
    Given(ShapeParams),
    Optimal,
}

impl Default for Shape {
    fn default() -> Self {
        Shape::Given(ShapeParams::default())
    }
}

/// An estimator together with how its constants are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimatorSpec {
    pub kind: EstimatorKind,
    pub shape: Shape,
    pub duals: Duals,
}

impl EstimatorSpec {
    pub fn new(kind: EstimatorKind) -> Self {
        EstimatorSpec {
            kind,
            shape: Shape::default(),
            duals: Duals::default(),
        }
    }

    pub fn with_shape(mut self, shape: ShapeParams) -> Self {
        self.shape = Shape::Given(shape);
        self
    }

    pub fn with_optimal_shape(mut self) -> Self {
        self.shape = Shape::Optimal;
        self
    }

    pub fn with_duals(mut self, k1: f64, k2: f64) -> Self {
        self.duals = Duals::Given { k1, k2 };
        self
    }

    pub fn with_optimal_duals(mut self) -> Self {
        self.duals = Duals::Optimal;
        self
    }

    /// Fully optimal constants for every estimator that has any.
    pub fn optimal(kind: EstimatorKind) -> Self {
        let spec = EstimatorSpec::new(kind);
        match kind.family() {
            ShapeFamily::Power | ShapeFamily::Transform => {
                let spec = spec.with_optimal_shape();
                if kind.has_duals() {
                    spec.with_optimal_duals()
                } else {
                    spec
                }
            }
            _ => spec,
        }
    }
}

/// An estimator with every constant fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolvedEstimator {
    pub kind: EstimatorKind,
    pub shape: ShapeParams,
    pub k1: f64,
    pub k2: f64,
}

impl ResolvedEstimator {
    pub fn new(kind: EstimatorKind, shape: ShapeParams, k1: f64, k2: f64) -> Self {
        ResolvedEstimator {
            kind,
            shape,
            k1,
            k2,
        }
    }

    pub fn plain(kind: EstimatorKind) -> Self {
        ResolvedEstimator::new(kind, ShapeParams::default(), 1.0, 0.0)
    }

    pub fn expansion(&self) -> ShapeExpansion {
        ShapeExpansion::of(self.kind.family(), &self.shape)
    }

    pub fn estimate(&self, stats: &SampleStats, mean_x: f64) -> Result<f64> {
        match (self.kind.family(), self.kind.layout()) {
            (ShapeFamily::None | ShapeFamily::Ratio | ShapeFamily::Product, _) => {
                estimate_baseline(self.kind, stats, mean_x)
            }
            (_, DualLayout::None) => estimate_shape(self.kind, stats, mean_x, &self.shape),
            _ => estimate_dual(self.kind, stats, mean_x, &self.shape, self.k1, self.k2),
        }
    }
}

/// Observed stratified sample means.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleStats {
    pub ybar_st: f64,
    pub xbar_st: f64,
    /// Per-stratum `(ȳ_h, x̄_h)`, when retained.
    pub strata: Vec<(f64, f64)>,
}

impl SampleStats {
    pub fn new(ybar_st: f64, xbar_st: f64) -> Self {
        SampleStats {
            ybar_st,
            xbar_st,
            strata: Vec::new(),
        }
    }

    /// Weighted combination `Σ W_h ȳ_h`, `Σ W_h x̄_h` of stratum means.
    pub fn from_strata(weights: &[f64], strata: Vec<(f64, f64)>) -> Self {
        let (mut ybar_st, mut xbar_st) = (0.0, 0.0);
        for (&w, &(y, x)) in weights.iter().zip(&strata) {
            ybar_st += w * y;
            xbar_st += w * x;
        }
        SampleStats {
            ybar_st,
            xbar_st,
            strata,
        }
    }

    pub fn deviations(&self, moments: &CombinedMoments) -> RelativeDeviations {
        RelativeDeviations {
            e0: self.ybar_st / moments.mean_y - 1.0,
            e1: self.xbar_st / moments.mean_x - 1.0,
        }
    }
}

/// `ȳ_st = Ȳ(1 + e0)`, `x̄_st = X̄(1 + e1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RelativeDeviations {
    pub e0: f64,
    pub e1: f64,
}

fn checked_pow(base: f64, exponent: f64) -> Result<f64> {
    if exponent == 0.0 {
        return Ok(1.0);
    }
    if base <= 0.0 && exponent.fract() != 0.0 {
        return Err(Error::NonPositiveBase { base, exponent });
    }
    if base == 0.0 && exponent < 0.0 {
        return Err(Error::ZeroDenominator);
    }
    if exponent == 1.0 {
        return Ok(base);
    }
    Ok(base.powf(exponent))
}

/// `2 - (x̄_st/X̄)^w`
pub fn power_factor(xbar_st: f64, mean_x: f64, w: f64) -> Result<f64> {
    if mean_x == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(2.0 - checked_pow(xbar_st / mean_x, w)?)
}

/// `[(x̄_st + a(X̄ - x̄_st)) / (x̄_st + b(X̄ - x̄_st))]^p`
pub fn transform_factor(xbar_st: f64, mean_x: f64, shape: &ShapeParams) -> Result<f64> {
    let deviation = mean_x - xbar_st;
    let (num, den) = if deviation == 0.0 {
        (xbar_st, xbar_st)
    } else {
        (
            (1.0 - shape.a) * xbar_st + shape.a * mean_x,
            (1.0 - shape.b) * xbar_st + shape.b * mean_x,
        )
    };
    if den == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    if num == den {
        return Ok(1.0);
    }
    checked_pow(num / den, shape.p)
}

pub fn estimate_baseline(kind: EstimatorKind, stats: &SampleStats, mean_x: f64) -> Result<f64> {
    let ybar = stats.ybar_st;
    let xbar = stats.xbar_st;
    match kind {
        EstimatorKind::Unbiased => Ok(ybar),
        EstimatorKind::CombinedRatio => {
            if xbar == 0.0 {
                return Err(Error::ZeroDenominator);
            }
            Ok(ybar * (mean_x / xbar))
        }
        EstimatorKind::CombinedProduct => {
            if mean_x == 0.0 {
                return Err(Error::ZeroDenominator);
            }
            Ok(ybar * (xbar / mean_x))
        }
        other => panic!("{other} is not a baseline estimator"),
    }
}

fn shape_factor(kind: EstimatorKind, xbar: f64, mean_x: f64, shape: &ShapeParams) -> Result<f64> {
    match kind.family() {
        ShapeFamily::Power => power_factor(xbar, mean_x, shape.w),
        ShapeFamily::Transform => transform_factor(xbar, mean_x, shape),
        _ => panic!("{kind} has no shape factor"),
    }
}

/// Evaluates `t1` or `t2`.
pub fn estimate_shape(
    kind: EstimatorKind,
    stats: &SampleStats,
    mean_x: f64,
    shape: &ShapeParams,
) -> Result<f64> {
    assert!(
        matches!(kind, EstimatorKind::T1 | EstimatorKind::T2),
        "{kind} is not a single-factor estimator"
    );
    Ok(stats.ybar_st * shape_factor(kind, stats.xbar_st, mean_x, shape)?)
}

/// Evaluates one of `t3..t6`.
pub fn estimate_dual(
    kind: EstimatorKind,
    stats: &SampleStats,
    mean_x: f64,
    shape: &ShapeParams,
    k1: f64,
    k2: f64,
) -> Result<f64> {
    let factor = shape_factor(kind, stats.xbar_st, mean_x, shape)?;
    let deviation = mean_x - stats.xbar_st;
    match kind.layout() {
        DualLayout::Scaled => Ok((k1 * stats.ybar_st + k2 * deviation) * factor),
        DualLayout::Additive => Ok(k1 * stats.ybar_st * factor + k2 * deviation),
        DualLayout::None => panic!("{kind} has no dual constants"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const MEAN_X: f64 = 326.0;

    #[test]
    fn balance_point_returns_sample_mean() {
        let s = SampleStats::new(100.0, MEAN_X);
        for kind in [
            EstimatorKind::Unbiased,
            EstimatorKind::CombinedRatio,
            EstimatorKind::CombinedProduct,
        ] {
            assert_eq!(estimate_baseline(kind, &s, MEAN_X).unwrap(), 100.0);
        }
        let shape = ShapeParams {
            w: 0.37,
            p: -1.7,
            a: 0.3,
            b: 2.1,
        };
        for kind in [EstimatorKind::T1, EstimatorKind::T2] {
            assert_eq!(estimate_shape(kind, &s, MEAN_X, &shape).unwrap(), 100.0);
        }
        for kind in [
            EstimatorKind::T3,
            EstimatorKind::T4,
            EstimatorKind::T5,
            EstimatorKind::T6,
        ] {
            let t = estimate_dual(kind, &s, MEAN_X, &shape, 0.9, 0.5).unwrap();
            assert_eq!(t, 0.9 * 100.0);
        }
    }

    #[test]
    fn ratio_and_product_by_hand() {
        let s = SampleStats::new(100.0, 300.0);
        let r = estimate_baseline(EstimatorKind::CombinedRatio, &s, MEAN_X).unwrap();
        let p = estimate_baseline(EstimatorKind::CombinedProduct, &s, MEAN_X).unwrap();
        assert_abs_diff_eq!(r, 108.666_666_666_666_7, epsilon = 1e-9);
        assert_abs_diff_eq!(p, 92.024_539_877_300_61, epsilon = 1e-9);
    }

    #[test]
    fn ratio_with_zero_sample_mean_fails() {
        let s = SampleStats::new(100.0, 0.0);
        assert_eq!(
            estimate_baseline(EstimatorKind::CombinedRatio, &s, MEAN_X).unwrap_err(),
            Error::ZeroDenominator
        );
    }

    #[test]
    fn t1_by_hand() {
        let s = SampleStats::new(100.0, 330.0);
        let t = estimate_shape(EstimatorKind::T1, &s, MEAN_X, &ShapeParams::power(1.0)).unwrap();
        assert_abs_diff_eq!(t, 100.0 * (2.0 - 330.0 / 326.0), epsilon = 1e-12);
        assert_abs_diff_eq!(t, 98.7730, epsilon = 1e-4);
    }

    #[test]
    fn t5_by_hand() {
        let s = SampleStats::new(100.0, 330.0);
        let t = estimate_dual(
            EstimatorKind::T5,
            &s,
            MEAN_X,
            &ShapeParams::power(1.0),
            0.9,
            0.5,
        )
        .unwrap();
        assert_abs_diff_eq!(
            t,
            0.9 * 100.0 * (2.0 - 330.0 / 326.0) - 2.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(t, 86.8957, epsilon = 1e-4);
    }

    #[test]
    fn zero_exponents_are_identity() {
        let s = SampleStats::new(100.0, 280.0);
        let t1 = estimate_shape(EstimatorKind::T1, &s, MEAN_X, &ShapeParams::power(0.0)).unwrap();
        let t2 = estimate_shape(
            EstimatorKind::T2,
            &s,
            MEAN_X,
            &ShapeParams::transform(0.0, 0.2, 0.7),
        )
        .unwrap();
        assert_eq!(t1, 100.0);
        assert_eq!(t2, 100.0);
    }

    #[test]
    fn t2_zero_denominator() {
        // x̄ + b(X̄ - x̄) = 0 with x̄ = 100, X̄ = 200, b = -1
        let s = SampleStats::new(10.0, 100.0);
        let err = estimate_shape(
            EstimatorKind::T2,
            &s,
            200.0,
            &ShapeParams::transform(1.0, 0.0, -1.0),
        )
        .unwrap_err();
        assert_eq!(err, Error::ZeroDenominator);
    }

    #[test]
    fn non_integer_power_of_negative_base_fails() {
        let s = SampleStats::new(10.0, -5.0);
        let err =
            estimate_shape(EstimatorKind::T1, &s, 20.0, &ShapeParams::power(0.5)).unwrap_err();
        assert!(matches!(err, Error::NonPositiveBase { .. }));
        // integer exponents are fine
        let t = estimate_shape(EstimatorKind::T1, &s, 20.0, &ShapeParams::power(2.0)).unwrap();
        assert_abs_diff_eq!(t, 10.0 * (2.0 - 0.0625), epsilon = 1e-12);
    }

    #[test]
    fn coefficient_block() {
        let shape = ShapeParams::transform(2.0, 0.25, 0.75);
        assert_eq!(shape.coef_a(), 1.5);
        assert_eq!(shape.coef_b(), 0.5);
        assert_eq!(shape.delta(), 1.0);
        assert_eq!(shape.d_prime(), -1.0);
        // [4·0.25 + 2(0.5625 - 0.0625 - 1)] / 2 = (1 - 1) / 2
        assert_eq!(shape.coef_c(), 0.0);
        let equal = ShapeParams::transform(3.0, 0.4, 0.4);
        assert_eq!(equal.delta(), 0.0);
    }

    #[test]
    fn parse_names() {
        assert_eq!("T3".parse::<EstimatorKind>().unwrap(), EstimatorKind::T3);
        assert_eq!(
            "ratio".parse::<EstimatorKind>().unwrap(),
            EstimatorKind::CombinedRatio
        );
        assert!("t7".parse::<EstimatorKind>().is_err());
        for kind in EstimatorKind::ALL {
            assert_eq!(kind.name().parse::<EstimatorKind>().unwrap(), kind);
        }
    }
}
