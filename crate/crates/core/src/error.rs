//! Shared error type for the whole library.

use num_bigint::BigInt;

use crate::series::Valuation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Two scalars carry different quadratic radicands.
    #[error("incompatible extension: sqrt({0}) vs sqrt({1})")]
    IncompatibleExtension(u64, u64),

    #[error("division by zero")]
    DivisionByZero,

    /// Sign or comparison requested on a scalar with nonzero imaginary part.
    #[error("not ordered: nonzero imaginary part")]
    NotOrdered,

    /// A square root left the current scalar tower; the named radicand would fix it.
    #[error("extension required: {0}")]
    ExtensionRequired(BigInt),

    /// The context already adjoins one radicand and a second one is needed.
    #[error("unsupported extension: context adjoins sqrt({present}), needs sqrt({needed})")]
    UnsupportedExtension { present: u64, needed: BigInt },

    /// An exponent denominator does not divide the ramification bound.
    #[error("precision: exponent {exp} outside 1/{ram} grid")]
    Ramification { exp: num_rational::BigRational, ram: u32 },

    /// Standard part of an element with negative valuation.
    #[error("outside O: valuation {0}")]
    OutsideO(Valuation),

    #[error("singular matrix: det valuation {det_val} not below certification bound {bound}")]
    Singular {
        det_val: Valuation,
        bound: num_rational::BigRational,
    },

    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },

    #[error("chart domain: {0}")]
    ChartDomain(String),

    /// Identity or involution: the rotation axis is not determined.
    #[error("axis undetermined")]
    AxisUndetermined,

    #[error("not a unit quaternion")]
    NotUnit,

    #[error("precision exhausted: achieved grade {achieved}")]
    PrecisionExhausted { achieved: num_rational::BigRational },

    #[error("not in required domain: {0}")]
    Domain(String),

    #[error("non-simple algebra: {0}")]
    NonSimple(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    #[error("parse error at offset {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },

    #[error("unknown suite: {0}")]
    UnknownSuite(String),

    #[error("config error: {0}")]
    Config(String),
}
