//! Crate-wide error type.
//!
//! Structural misuse of the kernel (mixing charts or bases, degree
//! preconditions) panics, since that is a caller bug; data-dependent
//! conditions (poles, parse failures, bad fixtures, unknown names) are
//! reported through [`Error`]. The DSL evaluator validates degrees and
//! kinds before dispatching into the kernel, so users of the CLI only ever
//! see typed errors.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pole: denominator vanishes at the evaluation point")]
    PoleAtPoint,

    #[error("division by the zero rational function")]
    DivisionByZero,

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("unknown identifier `{0}`")]
    UnknownIdent(String),

    #[error("evaluation error: {0}")]
    Eval(String),

    #[error("fixture error: {0}")]
    Fixture(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("unknown check id `{0}`")]
    UnknownCheck(String),

    #[error("no checks selected by filter `{0}`")]
    NoChecksSelected(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
