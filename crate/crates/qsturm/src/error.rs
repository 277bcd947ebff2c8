use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor argument violates its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// A series or product was evaluated at a point where it is singular
    /// (zero factor in an infinite product, pole of the q-gamma function).
    #[error("singular evaluation: {0}")]
    Singular(String),

    /// An argument lies outside the convergence domain of a series.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two lattice functions that must share a lattice do not.
    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),

    /// A backward q-derivative was requested at the top node x = a but the
    /// function carries no extension value at a/q.
    #[error("backward q-derivative at x = a needs an extension value at a/q")]
    MissingTopValue,

    /// A function that must vanish at the interval ends does not.
    #[error("boundary violation: {0}")]
    BoundaryViolation(String),

    /// A zero-bracketing scan failed to isolate a sign change.
    #[error("bracket failure: {0}")]
    BracketFailure(String),

    /// An iterative solver exhausted its iteration budget.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// The denominator of a quotient is numerically zero.
    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    /// Expression parse error with a byte offset into the source text.
    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },

    /// Expression evaluation error (division by zero, invalid power).
    #[error("evaluation error: {0}")]
    Eval(String),
}

pub type Result<T> = std::result::Result<T, Error>;
