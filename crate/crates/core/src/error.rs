use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero is not allowed here: {0}")]
    Zero(&'static str),
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(String, String),
    #[error("modulus must be positive, got {0}")]
    NonPositiveModulus(String),
    #[error("prime factor exceeds 64 bits in {0}")]
    FactorTooLarge(String),
    #[error("precision {given} is below the required {required}")]
    PrecisionTooSmall { given: u32, required: u32 },
    #[error("modulus p^{precision} for p = {prime} is too large for the exhaustive oracle")]
    PrecisionTooLarge { prime: u64, precision: u32 },
    #[error("search exhausted after {steps} candidates")]
    SearchExhausted { steps: u64 },
    #[error("search deadline passed after {steps} candidates")]
    DeadlineExceeded { steps: u64 },
    #[error("sampler produced reduced norm zero {attempts} times")]
    DegenerateSampler { attempts: u32 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("variable name collision: {0}")]
    NameCollision(String),
    #[error("formula shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("missing value for variable {0}")]
    MissingVariable(String),
    #[error("unknown format {0}")]
    UnknownFormat(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
