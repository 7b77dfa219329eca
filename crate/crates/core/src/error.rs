use thiserror::Error;

/// Errors surfaced by the census engine.
///
/// Variants tagged "implementation bug" in their message can only fire when an
/// internal invariant is broken; they are reported rather than swallowed.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("field of size {size} exceeds the enumeration cap {cap}")]
    CapExceeded { size: u64, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("modulus is not irreducible")]
    ReducibleModulus,
    #[error("more than two nontrivial invariant factors ({0}); implementation bug")]
    TooManyFactors(usize),
    #[error("no Frobenius characteristic polynomial found; implementation bug")]
    NoSolution,
    #[error("Frobenius characteristic polynomial is not unique; implementation bug")]
    MultipleSolutions,
    #[error("discriminant is not squarefree")]
    NotSquarefree,
    #[error("discriminant is not imaginary")]
    NotImaginary,
    #[error("class numbers are only supported in odd characteristic")]
    EvenCharacteristicUnsupported,
    #[error("conductor formula produced a non-integer; implementation bug")]
    NonIntegerResult,
    #[error("reports mix different (d, m) parameters")]
    MixedParameters,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violated at (g={g}, delta={delta}): {what}")]
    Invariant { g: u32, delta: u32, what: String },
}

pub type Result<T> = std::result::Result<T, Error>;
