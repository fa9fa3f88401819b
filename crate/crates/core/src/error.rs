use thiserror::Error;

/// Errors raised by design validation, estimation and simulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("design has no strata")]
    NoStrata,
    #[error("stratum {stratum}: population and sample counts must be positive")]
    NonPositiveCount { stratum: usize },
    #[error("stratum {stratum}: sample size {sample} exceeds stratum size {population}")]
    SampleExceedsStratum {
        stratum: usize,
        sample: u64,
        population: u64,
    },
    #[error("stratum weights sum to {sum}, expected 1")]
    WeightSumViolation { sum: f64 },
    #[error("stratum {stratum}: correlation {rho} outside [-1, 1]")]
    CorrelationOutOfRange { stratum: usize, rho: f64 },
    #[error("stratum {stratum}: variance of {variate} is negative")]
    NegativeVariance { stratum: usize, variate: char },
    #[error("stratum {stratum}: non-finite input value")]
    NonFinite { stratum: usize },
    #[error("stratum index {stratum} appears more than once")]
    DuplicateStratum { stratum: usize },
    #[error("stratum {stratum}: {units} unit(s) is too few")]
    DegenerateStratum { stratum: usize, units: usize },
    #[error("auxiliary population mean is zero; ratio is undefined")]
    ZeroAuxiliaryMean,
    #[error("estimator denominator is zero")]
    ZeroDenominator,
    #[error("non-positive base {base} raised to non-integer power {exponent}")]
    NonPositiveBase { base: f64, exponent: f64 },
    #[error("MSE surface is not positive definite (determinant {determinant})")]
    SingularSystem { determinant: f64 },
    #[error("MSE is not positive; relative efficiency is undefined")]
    ZeroMse,
    #[error("stratum {stratum}: target moments are infeasible")]
    InfeasibleMoments { stratum: usize },
    #[error("sample-size vector has {got} entries for {expected} strata")]
    StratumCountMismatch { expected: usize, got: usize },
    #[error("exhaustive enumeration needs {count} samples, above the limit of {limit}")]
    EnumerationTooLarge { count: f64, limit: f64 },
}

impl Error {
    /// Stable machine-readable name for the error variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NoStrata => "no_strata",
            Error::NonPositiveCount { .. } => "non_positive_count",
            Error::SampleExceedsStratum { .. } => "sample_exceeds_stratum",
            Error::WeightSumViolation { .. } => "weight_sum_violation",
            Error::CorrelationOutOfRange { .. } => "correlation_out_of_range",
            Error::NegativeVariance { .. } => "negative_variance",
            Error::NonFinite { .. } => "non_finite",
            Error::DuplicateStratum { .. } => "duplicate_stratum",
            Error::DegenerateStratum { .. } => "degenerate_stratum",
            Error::ZeroAuxiliaryMean => "zero_auxiliary_mean",
            Error::ZeroDenominator => "zero_denominator",
            Error::NonPositiveBase { .. } => "non_positive_base",
            Error::SingularSystem { .. } => "singular_system",
            Error::ZeroMse => "zero_mse",
            Error::InfeasibleMoments { .. } => "infeasible_moments",
            Error::StratumCountMismatch { .. } => "stratum_count_mismatch",
            Error::EnumerationTooLarge { .. } => "enumeration_too_large",
        }
    }

    /// True for errors caused by the input data rather than by a computation.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::NoStrata
                | Error::NonPositiveCount { .. }
                | Error::SampleExceedsStratum { .. }
                | Error::WeightSumViolation { .. }
                | Error::CorrelationOutOfRange { .. }
                | Error::NegativeVariance { .. }
                | Error::NonFinite { .. }
                | Error::DuplicateStratum { .. }
                | Error::DegenerateStratum { .. }
                | Error::InfeasibleMoments { .. }
                | Error::StratumCountMismatch { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
