use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library reports. Each variant maps to a stable
/// machine-readable code through [`Error::code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial reduction mod p is reducible")]
    ReducibleModP,
    #[error("polynomial reduction mod the maximal ideal is reducible over the residue field")]
    ReducibleModIdeal,
    #[error("Hensel lifting of the Frobenius root did not converge")]
    LiftDivergence,
    #[error("parameter out of supported range: {0}")]
    Unsupported(String),
    #[error("element does not belong to this ring")]
    SpecMismatch,
    #[error("element is not a unit")]
    NotUnit,
    #[error("elements do not form a basis of the extension over the base ring")]
    NotABasis,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("vector length {got} does not match partition length {expected}")]
    PartitionMismatch { expected: usize, got: usize },
    #[error("enumeration of {0} candidates exceeds the brute-force guard")]
    TooLargeToEnumerate(u128),
    #[error("leading coefficient of the divisor is not a unit")]
    LeadingNotUnit,
    #[error("evaluation points violate the MSRD property: {0}")]
    MsrdPropertyViolated(String),
    #[error("conjugate-difference condition violated on the evaluation points")]
    ConditionViolated,
    #[error("number of blocks {ell} exceeds q - 1 = {max}")]
    EllTooLarge { ell: usize, max: u64 },
    #[error("q = {q} and m = {m} are not coprime")]
    NotCoprime { q: u64, m: usize },
    #[error("generated point system failed validation: {0}")]
    ValidationFailed(String),
    #[error("invalid dimension: {0}")]
    BadDimension(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("code is not MSRD: minimum distance {found}, expected {expected}")]
    MsrdViolated { found: usize, expected: usize },
    #[error("transfer matrix free rank {free_rank} is below the code dimension {k}")]
    InsufficientFreeRank { free_rank: usize, k: usize },
    #[error("could not sample a matrix with the requested free rank")]
    SamplingExhausted,
    #[error("error weight {t} exceeds the maximum {max}")]
    BudgetInfeasible { t: usize, max: usize },
    #[error("2t + rho + 1 = {lhs} exceeds the minimum distance {d}")]
    BoundViolated { lhs: usize, d: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::NotMonic => "NotMonic",
            Error::ReducibleModP => "ReducibleModP",
            Error::ReducibleModIdeal => "ReducibleModIdeal",
            Error::LiftDivergence => "LiftDivergence",
            Error::Unsupported(_) => "Unsupported",
            Error::SpecMismatch => "SpecMismatch",
            Error::NotUnit => "NotUnit",
            Error::NotABasis => "NotABasis",
            Error::Inconsistent => "Inconsistent",
            Error::NotInvertible => "NotInvertible",
            Error::PartitionMismatch { .. } => "PartitionMismatch",
            Error::TooLargeToEnumerate(_) => "TooLargeToEnumerate",
            Error::LeadingNotUnit => "LeadingNotUnit",
            Error::MsrdPropertyViolated(_) => "MsrdPropertyViolated",
            Error::ConditionViolated => "ConditionViolated",
            Error::EllTooLarge { .. } => "EllTooLarge",
            Error::NotCoprime { .. } => "NotCoprime",
            Error::ValidationFailed(_) => "ValidationFailed",
            Error::BadDimension(_) => "BadDimension",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::MsrdViolated { .. } => "MsrdViolated",
            Error::InsufficientFreeRank { .. } => "InsufficientFreeRank",
            Error::SamplingExhausted => "SamplingExhausted",
            Error::BudgetInfeasible { .. } => "BudgetInfeasible",
            Error::BoundViolated { .. } => "BoundViolated",
            Error::Parse(_) => "Parse",
        }
    }
}
