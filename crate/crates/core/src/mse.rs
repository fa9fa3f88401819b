//! First-order bias and MSE of every estimator, MSE-optimal constants and
//! relative efficiencies.
//!
//! Every shape factor expands as `1 + α e1 + β e1²` (see
//! [`ShapeExpansion`]). Writing `V = v(ȳ_st)`, `Vx = v(x̄_st)`,
//! `K = cov(ȳ_st, x̄_st)`, a single-factor estimator has
//!
//! ```text
//! MSE  = V + α² R² Vx + 2 α R K
//! Bias = β Ȳ Vx / X̄² + α K / X̄
//! ```
//!
//! The dual estimators `t3..t6` have MSE
//!
//! ```text
//! Ȳ²(k1 - 1)² + k1² A + k2² B - 2 k1 C + 2 k2 D - 2 k1 k2 E
//! ```
//!
//! with `A = MSE + 2 Ȳ Bias`, `B = Vx`, `C = Ȳ Bias` of the embedded
//! single-factor estimator, `D = α R Vx` for the scaled layout (`t3`, `t4`)
//! and zero for the additive one, and `E = K + α R Vx` plus a second
//! `α R Vx` for the scaled layout. The `(k1 - 1)·bias` products are kept,
//! so the surface is minimized exactly by a 2×2 linear solve.

use serde::Serialize;

use crate::design::{CombinedMoments, ValidatedDesign};
use crate::error::{Error, Result};
use crate::estimators::{
    DualLayout, Duals, EstimatorKind, EstimatorSpec, ResolvedEstimator, Shape, ShapeExpansion,
    ShapeFamily, ShapeParams,
};

/// Relative size below which the normal-equation determinant counts as zero.
pub const SINGULAR_TOLERANCE: f64 = 1e-12;

/// Constants an MSE value was computed with. Fields an estimator does not
/// use are `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ResolvedConstants {
    pub w: Option<f64>,
    pub p: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub k1: Option<f64>,
    pub k2: Option<f64>,
}

impl ResolvedConstants {
    pub fn of(estimator: &ResolvedEstimator) -> Self {
        let mut c = ResolvedConstants::default();
        match estimator.kind.family() {
            ShapeFamily::Power => c.w = Some(estimator.shape.w),
            ShapeFamily::Transform => {
                c.p = Some(estimator.shape.p);
                c.a = Some(estimator.shape.a);
                c.b = Some(estimator.shape.b);
            }
            _ => {}
        }
        if estimator.kind.has_duals() {
            c.k1 = Some(estimator.k1);
            c.k2 = Some(estimator.k2);
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MseResult {
    pub estimator: ResolvedEstimator,
    pub mse: f64,
    /// First-order bias.
    pub bias: f64,
    pub constants: ResolvedConstants,
    /// Percent relative efficiency against `ȳ_st`.
    pub pre: f64,
    /// Set when an optimal constant was unidentified and a boundary value
    /// was substituted.
    pub degenerate: bool,
}

impl MseResult {
    fn build(estimator: ResolvedEstimator, mse: f64, m: &CombinedMoments) -> Result<Self> {
        Ok(MseResult {
            estimator,
            mse,
            bias: first_order_bias(&estimator, m),
            constants: ResolvedConstants::of(&estimator),
            pre: pre(mse, m)?,
            degenerate: false,
        })
    }
}

/// `V + α² R² Vx + 2 α R K`
pub fn mse_for_linear_coefficient(alpha: f64, m: &CombinedMoments) -> f64 {
    let r = m.ratio;
    m.var_ybar + alpha * alpha * r * r * m.var_xbar + 2.0 * alpha * r * m.cov_xybar
}

fn single_factor_bias(exp: ShapeExpansion, m: &CombinedMoments) -> f64 {
    exp.quadratic * m.mean_y * m.var_xbar / (m.mean_x * m.mean_x)
        + exp.linear * m.cov_xybar / m.mean_x
}

/// `Ȳ · bias` of the single-factor estimator, `β R² Vx + α R K`.
fn scaled_bias(exp: ShapeExpansion, m: &CombinedMoments) -> f64 {
    let r = m.ratio;
    exp.quadratic * r * r * m.var_xbar + exp.linear * r * m.cov_xybar
}

/// First-order bias of a fully resolved estimator.
pub fn first_order_bias(estimator: &ResolvedEstimator, m: &CombinedMoments) -> f64 {
    let exp = estimator.expansion();
    let inner = single_factor_bias(exp, m);
    let (k1, k2) = (estimator.k1, estimator.k2);
    match estimator.kind.layout() {
        DualLayout::None => inner,
        DualLayout::Additive => m.mean_y * (k1 - 1.0) + k1 * inner,
        DualLayout::Scaled => {
            m.mean_y * (k1 - 1.0) + k1 * inner - k2 * exp.linear * m.var_xbar / m.mean_x
        }
    }
}

/// Percent relative efficiency `100 · v(ȳ_st) / mse`.
pub fn pre(mse: f64, m: &CombinedMoments) -> Result<f64> {
    if mse <= 0.0 {
        return Err(Error::ZeroMse);
    }
    Ok(100.0 * m.var_ybar / mse)
}

pub fn mse_baseline(kind: EstimatorKind, m: &CombinedMoments) -> Result<MseResult> {
    assert!(
        matches!(
            kind.family(),
            ShapeFamily::None | ShapeFamily::Ratio | ShapeFamily::Product
        ),
        "{kind} is not a baseline estimator"
    );
    let estimator = ResolvedEstimator::plain(kind);
    let mse = mse_for_linear_coefficient(estimator.expansion().linear, m);
    MseResult::build(estimator, mse, m)
}

/// MSE of `t1` (uses `w`) or `t2` (uses `Δ = p(b - a)`).
pub fn mse_shape(
    kind: EstimatorKind,
    shape: &ShapeParams,
    m: &CombinedMoments,
) -> Result<MseResult> {
    assert!(
        matches!(kind, EstimatorKind::T1 | EstimatorKind::T2),
        "{kind} is not a single-factor estimator"
    );
    let estimator = ResolvedEstimator::new(kind, *shape, 1.0, 0.0);
    let mse = mse_for_linear_coefficient(estimator.expansion().linear, m);
    MseResult::build(estimator, mse, m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShapeOptimum {
    /// `w_opt` for `t1`, `Δ_opt` for `t2`.
    pub param: f64,
    pub shape: ShapeParams,
    pub result: MseResult,
    /// False when `v(x̄_st) = 0` (or `R = 0`) leaves the parameter unidentified.
    pub identified: bool,
}

/// The one-parameter optimum `w_opt = K / (R Vx)`; zero when unidentified.
pub fn optimal_power(m: &CombinedMoments) -> (f64, bool) {
    let denom = m.ratio * m.var_xbar;
    if denom == 0.0 || !denom.is_finite() {
        (0.0, false)
    } else {
        (m.cov_xybar / denom, true)
    }
}

/// Minimizes the MSE of `t1` over `w` or of `t2` over `Δ`.
///
/// For `t2` the optimum is realized with `(a, b) = (1, 0)` and `p = -Δ_opt`.
pub fn optimal_shape(kind: EstimatorKind, m: &CombinedMoments) -> Result<ShapeOptimum> {
    let (w_opt, identified) = optimal_power(m);
    let (param, shape) = match kind.family() {
        ShapeFamily::Power => (w_opt, ShapeParams::power(w_opt)),
        ShapeFamily::Transform => (-w_opt, ShapeParams::transform(w_opt, 1.0, 0.0)),
        _ => panic!("{kind} has no shape constant"),
    };
    let mut result = mse_shape(kind.embedded(), &shape, m)?;
    result.degenerate = !identified;
    Ok(ShapeOptimum {
        param,
        shape,
        result,
        identified,
    })
}

/// Closed form `V - K² / Vx` of the one-parameter optimum.
pub fn min_single_factor_mse(m: &CombinedMoments) -> f64 {
    if m.var_xbar == 0.0 {
        m.var_ybar
    } else {
        m.var_ybar - m.cov_xybar * m.cov_xybar / m.var_xbar
    }
}

/// Quadratic MSE surface of a dual estimator in `(k1, k2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticMseForm {
    pub ybar_sq: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    /// Value at `(1, 0)`: the MSE of the embedded single-factor estimator.
    pub base: f64,
}

impl QuadraticMseForm {
    pub fn new(kind: EstimatorKind, shape: &ShapeParams, m: &CombinedMoments) -> Self {
        assert!(kind.has_duals(), "{kind} has no dual constants");
        let exp = ShapeExpansion::of(kind.family(), shape);
        let base = mse_for_linear_coefficient(exp.linear, m);
        let c = scaled_bias(exp, m);
        let lin_vx = exp.linear * m.ratio * m.var_xbar;
        let (d, e) = match kind.layout() {
            DualLayout::Scaled => (lin_vx, m.cov_xybar + 2.0 * lin_vx),
            _ => (0.0, m.cov_xybar + lin_vx),
        };
        QuadraticMseForm {
            ybar_sq: m.mean_y * m.mean_y,
            a: base + 2.0 * c,
            b: m.var_xbar,
            c,
            d,
            e,
            base,
        }
    }

    /// Evaluates the surface, expanded around `(1, 0)` so that
    /// `eval(1, 0) == base` exactly.
    pub fn eval(&self, k1: f64, k2: f64) -> f64 {
        let u = k1 - 1.0;
        let (h11, h22, h12) = self.hessian();
        let (g1, g2) = self.centered_gradient();
        self.base + (u * u * h11 + k2 * k2 * h22 + 2.0 * u * k2 * h12) - 2.0 * (u * g1 + k2 * g2)
    }

    /// Half the Hessian: `[[Ȳ² + A, -E], [-E, B]]` as `(h11, h22, h12)`.
    fn hessian(&self) -> (f64, f64, f64) {
        (self.ybar_sq + self.a, self.b, -self.e)
    }

    /// Negative half-gradient at `(1, 0)`.
    fn centered_gradient(&self) -> (f64, f64) {
        (self.c - self.a, self.e - self.d)
    }

    pub fn determinant(&self) -> f64 {
        let (h11, h22, h12) = self.hessian();
        h11 * h22 - h12 * h12
    }

    /// Stationary point of the surface. Returns `(k1, k2, degenerate)`.
    pub fn minimize(&self) -> Result<(f64, f64, bool)> {
        let (h11, h22, h12) = self.hessian();
        let (g1, g2) = self.centered_gradient();
        let det = self.determinant();
        let scale = (h11 * h22).abs().max(h12 * h12);
        if scale == 0.0 || det.abs() <= SINGULAR_TOLERANCE * scale {
            // Flat direction: stay at k1 = 1 and take the best-response k2.
            if h22 > 0.0 {
                return Ok((1.0, g2 / h22, true));
            }
            if h11 <= 0.0 {
                return Err(Error::SingularSystem { determinant: det });
            }
            return Ok((1.0 + g1 / h11, 0.0, true));
        }
        if det < 0.0 || h11 <= 0.0 {
            return Err(Error::SingularSystem { determinant: det });
        }
        let u = (g1 * h22 - h12 * g2) / det;
        let k2 = (h11 * g2 - h12 * g1) / det;
        Ok((1.0 + u, k2, false))
    }
}

pub fn mse_dual(
    kind: EstimatorKind,
    k1: f64,
    k2: f64,
    shape: &ShapeParams,
    m: &CombinedMoments,
) -> Result<MseResult> {
    let form = QuadraticMseForm::new(kind, shape, m);
    MseResult::build(
        ResolvedEstimator::new(kind, *shape, k1, k2),
        form.eval(k1, k2),
        m,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualOptimum {
    pub k1: f64,
    pub k2: f64,
    pub form: QuadraticMseForm,
    pub result: MseResult,
}

pub fn optimal_dual(
    kind: EstimatorKind,
    shape: &ShapeParams,
    m: &CombinedMoments,
) -> Result<DualOptimum> {
    let form = QuadraticMseForm::new(kind, shape, m);
    let (k1, k2, degenerate) = form.minimize()?;
    let mut result = MseResult::build(
        ResolvedEstimator::new(kind, *shape, k1, k2),
        form.eval(k1, k2),
        m,
    )?;
    result.degenerate = degenerate;
    Ok(DualOptimum {
        k1,
        k2,
        form,
        result,
    })
}

/// Fixes every `Optimal` constant of a spec against the given moments.
/// The flag reports whether any optimum was degenerate.
pub fn resolve(spec: &EstimatorSpec, m: &CombinedMoments) -> Result<(ResolvedEstimator, bool)> {
    let kind = spec.kind;
    let mut degenerate = false;
    let shape = match (kind.family(), spec.shape) {
        (ShapeFamily::Power | ShapeFamily::Transform, Shape::Optimal) => {
            let opt = optimal_shape(kind, m)?;
            degenerate |= !opt.identified;
            opt.shape
        }
        (_, Shape::Given(shape)) => shape,
        (_, Shape::Optimal) => ShapeParams::default(),
    };
    let (k1, k2) = match (kind.has_duals(), spec.duals) {
        (false, _) => (1.0, 0.0),
        (true, Duals::Given { k1, k2 }) => (k1, k2),
        (true, Duals::Optimal) => {
            let (k1, k2, flag) = QuadraticMseForm::new(kind, &shape, m).minimize()?;
            degenerate |= flag;
            (k1, k2)
        }
    };
    Ok((ResolvedEstimator::new(kind, shape, k1, k2), degenerate))
}

/// First-order MSE, bias and PRE of any spec.
pub fn evaluate(spec: &EstimatorSpec, m: &CombinedMoments) -> Result<MseResult> {
    let (estimator, degenerate) = resolve(spec, m)?;
    let mut result = evaluate_resolved(&estimator, m)?;
    result.degenerate = degenerate;
    Ok(result)
}

pub fn evaluate_resolved(estimator: &ResolvedEstimator, m: &CombinedMoments) -> Result<MseResult> {
    let kind = estimator.kind;
    match (kind.family(), kind.has_duals()) {
        (ShapeFamily::None | ShapeFamily::Ratio | ShapeFamily::Product, _) => mse_baseline(kind, m),
        (_, false) => mse_shape(kind, &estimator.shape, m),
        (_, true) => mse_dual(kind, estimator.k1, estimator.k2, &estimator.shape, m),
    }
}

/// Row specs of the standard comparison: `t1..t6` at optimal constants,
/// then the ratio, product and unbiased baselines.
///
/// `t4` and `t6` keep `(p, a, b) = (1, 1, 0)` and optimize only the duals.
pub fn standard_specs() -> Vec<EstimatorSpec> {
    use EstimatorKind::*;
    let ratio_shape = ShapeParams::transform(1.0, 1.0, 0.0);
    vec![
        EstimatorSpec::optimal(T1),
        EstimatorSpec::optimal(T2),
        EstimatorSpec::optimal(T3),
        EstimatorSpec::new(T4)
            .with_shape(ratio_shape)
            .with_optimal_duals(),
        EstimatorSpec::optimal(T5),
        EstimatorSpec::new(T6)
            .with_shape(ratio_shape)
            .with_optimal_duals(),
        EstimatorSpec::new(CombinedRatio),
        EstimatorSpec::new(CombinedProduct),
        EstimatorSpec::new(Unbiased),
    ]
}

/// One row per spec, in the given order.
pub fn efficiency_table(
    design: &ValidatedDesign,
    specs: &[EstimatorSpec],
) -> Result<Vec<MseResult>> {
    let m = design.moments()?;
    specs.iter().map(|spec| evaluate(spec, &m)).collect()
}
