//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown symbol `{name}` at position {pos}")]
    UnknownSymbol { name: String, pos: usize },

    #[error("division by zero{}", if *at_parse { " expression" } else { "" })]
    DivisionByZero { at_parse: bool },

    #[error("zero base raised to negative exponent {exponent}")]
    ZeroToNegativePower { exponent: i64 },

    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),

    #[error("invalid chart: {0}")]
    InvalidChart(String),

    #[error("chart mismatch: operands belong to different charts")]
    ChartMismatch,

    #[error("tensor type mismatch: expected ({expected_r},{expected_s}), got ({got_r},{got_s})")]
    TypeMismatch {
        expected_r: usize,
        expected_s: usize,
        got_r: usize,
        got_s: usize,
    },

    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("bundle mismatch: operands belong to different anchored bundles")]
    BundleMismatch,

    #[error("flavor mismatch: almost and lie sections cannot be combined")]
    FlavorMismatch,

    #[error(
        "depth overflow: bracket of {left} (degree {left_degree}) with {right} (degree {right_degree}) exceeds bound {bound}"
    )]
    DepthOverflow {
        left: String,
        left_degree: usize,
        right: String,
        right_degree: usize,
        bound: usize,
    },

    #[error("generator index {index} out of range for {count} generators")]
    GeneratorOutOfRange { index: usize, count: usize },

    #[error("slot/connection count mismatch: tensor has {slots} slots but {connections} connections were given")]
    SlotCountMismatch { slots: usize, connections: usize },

    #[error("covariant arity violation: expected at least one covariant slot")]
    ArityViolation,

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("morphism invariant violated: {0}")]
    MorphismInvariant(String),

    #[error("morphism postcondition violated: {0}")]
    MorphismPostcondition(String),

    #[error("jacobiator did not normalize to zero in the lie flavor")]
    JacobiatorNotZero,
}

pub type Result<T> = std::result::Result<T, Error>;
