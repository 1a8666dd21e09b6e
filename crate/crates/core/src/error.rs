//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised while parsing `.pprm` text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable index 0 at byte {pos} (indices are 1-based)")]
    ZeroIndex { pos: usize },
    #[error("variable x{var} repeated within a term at byte {pos}")]
    RepeatedVar { var: u32, pos: usize },
    #[error("variable x{var} exceeds declared width {n}")]
    VarOutOfRange { var: u32, n: u32 },
    #[error("negative literal ~x{var} rejected in strict mode")]
    NegativeLiteral { var: u32 },
    #[error("factor group and factor variables share x{var}")]
    OverlappingVars { var: u32 },
    #[error("factor variables must hold at least two entries")]
    ShortFactorVars,
    #[error("malformed header directive: {0}")]
    Header(String),
}

/// Errors raised while building or transforming circuits.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("term references variable x{var} but the circuit has {n} inputs")]
    VarOutOfRange { var: u32, n: u32 },
    #[error("assignment length {got} does not match variable count {want}")]
    AssignmentLength { got: usize, want: usize },
    #[error("factorization table rows must share one degree (found {0} and {1})")]
    MixedDegrees(usize, usize),
    #[error("factorization rejects negative literals (x{0})")]
    NegativeInTable(u32),
    #[error("factorization groups need at least two terms")]
    GroupTooSmall,
    #[error("empty factorization table")]
    EmptyTable,
    #[error("gate has {got} controls, expected {want}")]
    ControlCount { got: usize, want: usize },
    #[error("not enough free lines: need {need}, have {have}")]
    InsufficientFreeLines { need: usize, have: usize },
    #[error("decomposition requires {0}")]
    Precondition(&'static str),
    #[error("circuit width {0} exceeds simulation cap {1}")]
    WidthCap(usize, usize),
    #[error("circuit widths differ: {0} vs {1}")]
    WidthMismatch(usize, usize),
}
