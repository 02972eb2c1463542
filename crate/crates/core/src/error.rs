use num_complex::Complex64;
use thiserror::Error;

use crate::extmath::ExtCard;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operator is not defined at lambda = {re} + {im}i (origin-only support)", re = .lambda.re, im = .lambda.im)]
    UnsupportedPoint { lambda: Complex64 },

    #[error("operator kind has no canonical basis realization: {0}")]
    UnsupportedKind(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error(
        "hypothesis violated at index {index}: alpha(D_{alpha_index}) = {alpha}, beta(D_{beta_index}) = {beta}"
    )]
    HypothesisViolated {
        /// 1-based index of the offending diagonal entry.
        index: usize,
        alpha_index: usize,
        alpha: ExtCard,
        beta_index: usize,
        beta: ExtCard,
    },

    #[error("operation requires a dense diagonal tuple")]
    NotDense,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown canned example `{0}`")]
    UnknownExample(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
