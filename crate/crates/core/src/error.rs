use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside the domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid precision budget: {0}")]
    InvalidBudget(&'static str),

    #[error(
        "term budget exhausted: {max_terms} terms reach error {achieved:e}, requested {requested:e}"
    )]
    BudgetExhausted {
        achieved: f64,
        requested: f64,
        max_terms: usize,
    },

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("operator is not compact: {0}")]
    NonCompact(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("root bracketing failed on [{lo}, {hi}]")]
    Bracketing { lo: f64, hi: f64 },

    #[error("matrix with {entries} entries exceeds the cap of {cap}")]
    ResourceLimit { entries: usize, cap: usize },

    #[error("result overflows binary64: {0}")]
    Overflow(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
