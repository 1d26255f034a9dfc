use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The continued fraction has no value (the (1,1) entry of its matrix is zero).
    #[error("continued fraction has no finite value")]
    UndefinedValue,

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("malformed input: {0}")]
    MalformedInput(String),

    /// Even denominator: the fraction describes a 2-bridge link, not a knot.
    #[error("{0} describes a 2-bridge link, not a knot")]
    IsLink(String),

    #[error("{0} describes the trivial knot")]
    Trivial(String),

    #[error("expansion budget exceeded: {needed} expansions needed, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("parse error: {0}")]
    Parse(String),

    /// Broken internal invariant. Seeing this is a bug.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
