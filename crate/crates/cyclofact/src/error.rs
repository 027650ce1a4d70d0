use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Most variants are precondition failures: the algorithms here only make
/// sense under explicit arithmetic hypotheses, and we report which one broke
/// rather than silently producing a wrong polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("the field characteristic divides {0}, which must be coprime to it")]
    CharacteristicDivides(u64),

    #[error("zero has no multiplicative order")]
    ZeroElement,

    #[error("element is not a square")]
    NonResidue,

    #[error("q^{0} - 1 does not fit in 128 bits; refusing to factor the group order")]
    SizeRefusal(usize),

    #[error("polynomial division by zero")]
    DivisionByZero,

    #[error("division left a nonzero remainder where exact division was required")]
    InexactDivision,

    #[error("operands live at different extension levels ({0} vs {1})")]
    MixedLevels(usize, usize),

    #[error("coefficients do not lie in the base field; cannot descend")]
    DescentFailure,

    #[error("no primitive {0}-th root of unity at extension level {1}")]
    NoSuchRoot(u64, usize),

    #[error("{kind} composed product is undefined: an operand vanishes at {point}")]
    RootOutsideDomain { kind: &'static str, point: &'static str },

    #[error("orders modulo the prime-power parts of {0} are not pairwise coprime")]
    OrdersNotCoprime(u64),

    #[error("{0} is not a primitive root modulo {1}")]
    NotPrimitiveRoot(u128, u64),

    #[error("construction hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("f(x) does not divide f(x^{0})")]
    NonDivisibility(u64),

    #[error("initial state has length {got}, expected {want}")]
    LengthMismatch { got: usize, want: usize },

    #[error("polynomial must be monic of positive degree")]
    NotMonic,

    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
