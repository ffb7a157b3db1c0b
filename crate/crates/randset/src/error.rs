use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building or combining domain values.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ground space needs at least one point")]
    EmptySpace,
    #[error("weight {weight} at point {index} must be finite and strictly positive")]
    NonPositiveWeight { index: usize, weight: f64 },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("alpha must be strictly positive, got {0}")]
    InvalidAlpha(f64),
    #[error("set has zero measure where positive measure is required")]
    ZeroMeasureSet,
    #[error("coefficients must sum to zero, got {0:e}")]
    CoefficientsNotZeroSum(f64),
    #[error("system sets are not pairwise disjoint")]
    NotDisjointSystem,
    #[error("probability {prob} at atom {index} is negative")]
    NegativeProbability { index: usize, prob: f64 },
    #[error("probabilities sum to {0}, expected 1")]
    ProbabilitySumMismatch(f64),
    #[error("order p must be at least 1, got {0}")]
    InvalidOrder(f64),
    #[error("set is not a support atom")]
    NotInSupport,
    #[error("conditioning would remove all probability mass")]
    TotalMassRemoved,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("invalid decomposition: {0}")]
    DecompositionInvalid(String),
    #[error("random set is not stable")]
    NotStable,
    #[error("chain is not strictly nested at position {0}")]
    NotNested(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("samples must have equal sizes, got {0} and {1}")]
    UnequalSampleSizes(usize, usize),
    #[error("sample must be nonempty")]
    EmptySample,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("distance exponent must lie in (0, 2), got {0}")]
    InvalidExponent(f64),
    #[error("mean function value {value} at point {index} is outside [0, 1]")]
    ValueOutOfRange { index: usize, value: f64 },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the variant, for structured output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptySpace => "EmptySpace",
            Error::NonPositiveWeight { .. } => "NonPositiveWeight",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidAlpha(_) => "InvalidAlpha",
            Error::ZeroMeasureSet => "ZeroMeasureSet",
            Error::CoefficientsNotZeroSum(_) => "CoefficientsNotZeroSum",
            Error::NotDisjointSystem => "NotDisjointSystem",
            Error::NegativeProbability { .. } => "NegativeProbability",
            Error::ProbabilitySumMismatch(_) => "ProbabilitySumMismatch",
            Error::InvalidOrder(_) => "InvalidOrder",
            Error::NotInSupport => "NotInSupport",
            Error::TotalMassRemoved => "TotalMassRemoved",
            Error::PreconditionFailed(_) => "PreconditionFailed",
            Error::DecompositionInvalid(_) => "DecompositionInvalid",
            Error::NotStable => "NotStable",
            Error::NotNested(_) => "NotNested",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::UnequalSampleSizes(..) => "UnequalSampleSizes",
            Error::EmptySample => "EmptySample",
            Error::InvalidPartition(_) => "InvalidPartition",
            Error::InvalidExponent(_) => "InvalidExponent",
            Error::ValueOutOfRange { .. } => "ValueOutOfRange",
            Error::Parse(_) => "Parse",
        }
    }
}
