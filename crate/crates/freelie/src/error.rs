use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("coefficient ring mismatch: {left} vs {right}")]
    RingMismatch { left: String, right: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("p-adic precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: u8, right: u8 },
    #[error("letter {letter} out of range 1..={n}")]
    LetterOutOfRange { letter: u8, n: u8 },
    #[error("empty word not allowed here")]
    EmptyWord,
    #[error("word {0} is not a Lyndon word")]
    NotLyndon(String),
    #[error("word {0} has no factorization (single letter)")]
    NoFactorization(String),
    #[error("degree {degree} out of range 0..={max}")]
    DegreeOutOfRange { degree: u32, max: u32 },
    #[error("series context mismatch")]
    ContextMismatch,
    #[error("constant term must be 1")]
    ConstantTermNotOne,
    #[error("constant term must be 0")]
    ConstantTermNotZero,
    #[error("operation needs a coefficient ring containing the rationals")]
    RingNotRational,
    #[error("negative exponent over the integer ring; invert explicitly instead")]
    NegativeIntegerExponent,
    #[error("series is not primitive")]
    NotPrimitive,
    #[error("series is not grouplike; first violated pair ({left}, {right})")]
    NotGrouplike { left: String, right: String },
    #[error("series has a non-integral coefficient at {0}")]
    NotIntegral(String),
    #[error("approximation {index} does not match the target exponent")]
    IncoherentSequence { index: usize },
    #[error("order search exceeded the p-group bound {bound}")]
    OrderSearchExceeded { bound: u64 },
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
