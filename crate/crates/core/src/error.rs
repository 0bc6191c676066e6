use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular (not in GL_n(q))")]
    Singular,

    #[error("parse error at position {position} in {input:?}: expected {expected}")]
    Parse {
        input: String,
        position: usize,
        expected: String,
    },

    /// The modified type has no elements in `G_n` for the requested `n`.
    #[error("class empty in G_{n}: type {ty} needs n >= {needed}")]
    ClassEmpty { ty: String, n: usize, needed: usize },

    #[error("resource bound exceeded: {what} has cardinality {size}, bound is {bound}")]
    ResourceBound {
        what: String,
        size: String,
        bound: u64,
    },

    #[error("type role mismatch: expected a {expected} type")]
    RoleMismatch { expected: &'static str },

    #[error("norm mismatch: {0}")]
    NormMismatch(String),

    #[error("reflection length not additive: l(gh) = {gh}, l(g) + l(h) = {sum}")]
    LengthNotAdditive { gh: usize, sum: usize },

    #[error("conjugator search inconclusive after {tries} random samples (solution space dimension {dim})")]
    Inconclusive { tries: usize, dim: usize },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(input: &str, position: usize, expected: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            position,
            expected: expected.into(),
        }
    }
}
