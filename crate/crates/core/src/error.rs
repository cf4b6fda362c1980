use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u128),
    #[error("{0} is not a prime power")]
    NotAPrimePower(u128),
    #[error("modulus is reducible over the prime field")]
    ReducibleModulus,
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("field too large: {0}")]
    FieldTooLarge(String),
    #[error("zero has no multiplicative order or inverse")]
    ZeroElement,
    #[error("element is not a square")]
    NotASquare,
    #[error("no embedding between the given fields")]
    NoEmbedding,
    #[error("the identity has no well-defined fixed point set")]
    IdentityElement,
    #[error("singular matrix")]
    Singular,
    #[error("subgroup order could not be determined")]
    CapExceededWithoutOrder,
    #[error("unrecognized subgroup: {0}")]
    UnrecognizedSubgroup(String),
    #[error("subgroup elements are not materialized")]
    ElementsNotMaterialized,
    #[error("generator of order 1 in rotation triple")]
    DegenerateOrder,
    #[error("parabolic subgroup too large to materialize")]
    ParabolicTooLarge,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("element order {0} is at most 2")]
    OrderTooSmall(u128),
    #[error("q = {0} has the wrong residue for this family")]
    WrongResidue(u128),
    #[error("5 has no square root in this field")]
    NoSqrt5,
    #[error("unsupported scale: {0}")]
    UnsupportedScale(String),
    #[error("omega1 is zero")]
    DegenerateOmega1,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
