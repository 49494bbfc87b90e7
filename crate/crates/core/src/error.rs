use thiserror::Error;

use crate::bounds::BoundId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The plain (unscaled) value is not representable in `f64`.
    #[error("overflow: {what} at x = {x} exceeds the representable range; use the scaled variant")]
    Overflow { what: &'static str, x: f64 },

    #[error("{id} requires {required}, got a = {a}, b = {b}")]
    Regime {
        id: BoundId,
        required: &'static str,
        a: f64,
        b: f64,
    },

    #[error("{id} is singular at a = {a}, b = {b} ({reason})")]
    Singularity {
        id: BoundId,
        reason: &'static str,
        a: f64,
        b: f64,
    },

    #[error("{id} produced a non-finite value at a = {a}, b = {b}")]
    NonFinite { id: BoundId, a: f64, b: f64 },

    #[error("{method} did not converge: {detail}")]
    NonConvergence {
        method: &'static str,
        detail: String,
    },

    #[error(
        "reference methods disagree at a = {a}, b = {b}: quadrature {quadrature}, series {series}, gap {gap:e}"
    )]
    CrossValidation {
        a: f64,
        b: f64,
        quadrature: f64,
        series: f64,
        gap: f64,
    },

    #[error("unknown figure {0}; figures are numbered 1 to 10")]
    UnknownFigure(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
