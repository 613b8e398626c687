use thiserror::Error;

use crate::pq_arith::MAX_DEGREE;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape parameters must be finite and positive, got p = {p}, q = {q}")]
    InvalidParams { p: f64, q: f64 },

    #[error("degree {degree} exceeds the supported maximum of {MAX_DEGREE}")]
    DegreeTooHigh { degree: usize },

    #[error("(p,q)-factorial [{n}]! overflows f64")]
    FactorialOverflow { n: usize },

    #[error("control polygon must contain at least one point")]
    EmptyPolygon,

    #[error("control net must be a non-empty rectangular grid (row {row} has {found} points, expected {expected})")]
    NonRectangular {
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("sample count must be at least 2, got {0}")]
    SampleCount(usize),

    #[error("coordinate is not finite")]
    NonFinite,

    #[error("operation needs a {expected} scene")]
    WrongKind { expected: &'static str },

    #[error("audit needs at least one parameter pair and one t-value")]
    EmptyGrid,
}

pub type Result<T> = std::result::Result<T, Error>;
