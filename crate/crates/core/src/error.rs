use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("variable mismatch: {left} vs {right}")]
    VariableMismatch { left: &'static str, right: &'static str },

    #[error("polynomial has nonzero constant term {0}")]
    NonzeroConstantTerm(String),

    #[error("power series inner argument has nonzero constant term {0}")]
    NonzeroInnerConstant(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("|m| = {m} exceeds the sequence bound {bound}")]
    BoundExceeded { m: i64, bound: i64 },

    #[error("expected a polynomial, got a rational function with denominator power {0}")]
    NotPolynomial(u32),

    #[error("enumeration of {needed} matrices exceeds budget {budget}")]
    BudgetExceeded { needed: String, budget: u64 },

    #[error("not in canonical form: {0}")]
    NotCanonical(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}
