use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lattice periods differ: {left} vs {right}")]
    PeriodMismatch { left: usize, right: usize },

    #[error("lattice sum is {sum}, not zero; (Λ-1) cannot be inverted")]
    NonZeroMean { sum: String },

    #[error("degree {degree} lies outside the exactly known window [{known}]")]
    TruncationViolation { degree: i64, known: String },

    #[error("product of an operator truncated below with one unbounded above is not defined")]
    UndefinedProduct,

    #[error("tangent vector has a nonzero component along V at degree {degree}")]
    NonVanishingVComponent { degree: i64 },

    #[error("Dirac reduction condition fails: {0}")]
    StarConditionViolated(String),

    #[error("unsupported coordinate index: {0}")]
    UnsupportedIndex(String),

    #[error("coordinate {0} lies beyond the stored depth")]
    DepthExceeded(String),

    #[error("flow leaves the affine space: {0}")]
    TangencyViolation(String),

    #[error("integration step rejected at t = {time}: {reason}")]
    StepRejected { time: f64, reason: String },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
