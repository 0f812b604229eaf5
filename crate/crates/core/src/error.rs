use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a prime in the supported range 2..=97")]
    NotPrime(u32),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("zero has no multiplicative inverse")]
    InverseOfZero,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parameter mismatch between Pauli elements")]
    ParameterMismatch,
    #[error("central element has no image in the polar space")]
    CentralElement,
    #[error("invalid spread: {0}")]
    InvalidSpread(String),
    #[error("operators do not commute: {0}")]
    NonCommuting(String),
    #[error("operator is not unitary: {0}")]
    NonUnitary(String),
    #[error("residual eigenspace of dimension {0}: family is not maximal abelian")]
    ResidualBlock(usize),
    #[error("scalar {0} does not have unit modulus")]
    NonUnitScalar(String),
    #[error("invalid MCC: {0}")]
    InvalidMcc(String),
    #[error("invalid MUB set: {0}")]
    InvalidMub(String),
    #[error("closure cap of {0} elements exceeded")]
    CapExceeded(usize),
    #[error("enumeration guard violated: {0}")]
    GuardViolation(String),
    #[error("cannot parse input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
