use thiserror::Error;

use crate::conformal::Profile;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("generator index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: u32, dim: usize },
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("operands live in different algebra contexts")]
    ContextMismatch,
    #[error("operation requires the {expected:?} profile, got {found:?}")]
    ProfileMismatch { expected: Profile, found: Profile },
    #[error("element has inhomogeneous parity")]
    MixedParity,
    #[error("polynomial is not homogeneous of weight {expected}: {offending}")]
    Inhomogeneous { expected: i64, offending: String },
    #[error("homogeneity weight must be a positive integer, got {0}")]
    NonPositiveHomogeneity(i64),
    #[error("coordinate weights must be nonzero")]
    ZeroWeight,
    #[error("expected {expected} coordinate weights, got {found}")]
    WeightCount { expected: usize, found: usize },
    #[error("slice at weights {weights:?} would be infinite: all coordinate weights must be positive")]
    InfiniteSlice { weights: Vec<i64> },
    #[error("polyvector is not a vector field (psi-degree must be exactly 1)")]
    NotVectorField,
    #[error("rank formula requires a >= 1")]
    ZeroHomogeneity,
    #[error("pole of Theta at alpha = 0{0}")]
    ThetaPole(String),
    #[error("series division needs an invertible leading coefficient")]
    NonInvertible,
    #[error("exponent {0} is not a multiple of 1/{1}")]
    FractionalExponent(String, u32),
    #[error("substitution hits a vanishing denominator factor")]
    VanishingDenominator,
    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error("engine inconsistency: {0}")]
    EngineDisagreement(String),
    #[error("twisted currents have not been built")]
    MissingTwist,
    #[error("cache error: {0}")]
    Cache(String),
}
