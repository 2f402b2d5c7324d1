use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mean arguments must be positive and finite, got ({a}, {b})")]
    Domain { a: f64, b: f64 },

    /// The pair has equal arguments, so ratios of mean differences are 0/0.
    #[error("degenerate pair ({a}, {b}): arguments are equal")]
    Degenerate { a: f64, b: f64 },

    #[error("argument {0} is outside the function's domain")]
    Argument(f64),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Bisection was handed an interval without a sign change.
    #[error("no sign change on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("unknown mean `{0}`")]
    UnknownMean(String),

    #[error("unknown inequality record `{0}`")]
    UnknownRecord(String),

    #[error("record `{0}` has no sharp constant")]
    NotSharp(String),

    /// The pair lies outside the record's stated domain; callers skip it.
    #[error("pair outside the domain of `{0}`")]
    OutsideDomain(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
