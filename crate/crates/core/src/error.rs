use thiserror::Error;

use crate::exactalg::Ring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(Ring, Ring),
    #[error("variable set mismatch: [{0}] vs [{1}]")]
    VariableMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("coefficient not divisible by {divisor} at monomial {monomial}")]
    NotDivisible { divisor: String, monomial: String },
    #[error("operation requires the integers, got {0}")]
    RequiresIntegers(Ring),
    #[error("invalid modulus {0}")]
    InvalidModulus(String),
    #[error("assignment does not cover variable {0}")]
    MissingVariable(String),
    #[error("negative exponent on non-Laurent variable {0}")]
    NegativeExponent(String),
    #[error("cannot invert {0}")]
    NotInvertible(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("group mismatch: {0} vs {1}")]
    GroupMismatch(String, String),
    #[error("comodule mismatch: {0}")]
    ComoduleMismatch(String),
    #[error("wrong base ring: {0}")]
    WrongBaseRing(String),
    #[error("axiom violated: {0}")]
    AxiomViolated(String),
    #[error("not a subcomodule: {0}")]
    NotStable(String),
    #[error("coefficients are not torus-structured: {0}")]
    NotTorusStructured(String),
    #[error("verification failed: {reason}; witness: {witness}")]
    VerificationFailed { reason: String, witness: String },
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
