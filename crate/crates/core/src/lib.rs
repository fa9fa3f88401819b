//! Estimation of a finite population mean under stratified simple random
//! sampling without replacement, using a known auxiliary mean.
//!
//! * [`design`]: stratum summaries, validation and combined moments.
//! * [`estimators`]: unbiased, combined ratio/product and the `t1..t6`
//!   ratio-type and ratio-cum-difference estimators.
//! * [`mse`]: first-order bias and MSE, optimal constants, efficiency tables.
//! * [`montecarlo`]: moment-matched populations, seeded replication and
//!   exhaustive enumeration used to check the formulas.
//! * [`datasets`]: bundled example designs.

pub mod datasets;
pub mod design;
pub mod error;
pub mod estimators;
pub mod montecarlo;
pub mod mse;

pub use design::{
    aggregate_moments, summarize_stratum, validate_design, CombinedMoments, DesignSummary,
    Microdata, StratumSummary, StratumUnits, ValidatedDesign,
};
pub use error::{Error, Result};
pub use estimators::{
    estimate_baseline, estimate_dual, estimate_shape, Duals, EstimatorKind, EstimatorSpec,
    RelativeDeviations, ResolvedEstimator, SampleStats, Shape, ShapeParams,
};
pub use montecarlo::{
    draw_stratified_srswor, enumerate_exhaustive, replicate, synthesize_population,
    EmpiricalReport, EmpiricalRow, FinitePopulation,
};
pub use mse::{
    efficiency_table, first_order_bias, mse_baseline, mse_dual, mse_shape, optimal_dual,
    optimal_shape, pre, MseResult, QuadraticMseForm, ResolvedConstants,
};
