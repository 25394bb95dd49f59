use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A lower hypergeometric parameter sits on (or within the float guard
    /// of) a non-positive integer.
    #[error("lower parameter {param} is zero or a negative integer")]
    PoleParameter { param: String },

    #[error("series did not converge within {terms} terms")]
    NoConvergence { terms: usize },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    /// `(n+λ)(n+λ+β-1)` vanished: the exponents are resonant at order `n`.
    #[error("recurrence denominator vanishes at n = {n}")]
    ResonantDenominator { n: usize },

    #[error("parameter a = {a} is excluded: {reason}")]
    ExcludedParameter { a: String, reason: String },

    /// The indicial exponents differ by an integer, so the second solution
    /// may carry a logarithm and series matching is not attempted.
    #[error("a = {a} puts the indicial exponents an integer apart; connection matching is deferred")]
    ResonantParameter { a: String },

    #[error("{lambda} is not an indicial root of the equation")]
    NotIndicialRoot { lambda: String },

    #[error("series matching failed at order {order}")]
    ConnectionMismatch { order: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported hypergeometric spec: {0}")]
    UnsupportedSpec(String),

    #[error("parse error: {0}")]
    Parse(String),
}
