use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),

    #[error("inconsistent character assignment: {0}")]
    InconsistentCharacter(String),

    #[error("generators span a subgroup of order {spanned}, unit group has order {group_order}")]
    IncompleteGenerators { spanned: usize, group_order: usize },

    #[error("pole at s = 1")]
    Pole,

    #[error("Euler factor vanishes at {0}")]
    SingularFactor(String),

    #[error("L-value vanishes at the requested point")]
    ZeroTarget,

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("argument tracking failed at t = {t}")]
    TrackingFailure { t: f64 },

    #[error("scaling-exponent search stopped at the interval endpoint {lambda}")]
    SearchAtBoundary { lambda: f64 },

    #[error("inconsistent point counts: {0}")]
    InconsistentCounts(String),

    #[error("polynomial is not squarefree")]
    NotSquarefree,

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
