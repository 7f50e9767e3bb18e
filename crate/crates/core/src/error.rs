use thiserror::Error;

/// Errors raised by the knot-complex operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid torus parameters ({p}, {q}): p,q must be coprime and at least 2")]
    InvalidTorusParameters { p: i64, q: i64 },

    #[error("polynomial is not of L-space form: {0}")]
    NotLSpaceForm(String),

    #[error("invalid staircase: {0}")]
    InvalidStaircase(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("illegal basis change {y}' = {y} + {x}: {reason}")]
    IllegalBasisChange { x: String, y: String, reason: String },

    #[error("inadmissible plan: {0}")]
    InadmissiblePlan(String),

    #[error("cross-subset arrows out of subset {0} cannot be removed by a filtered basis change")]
    ObstructedDiagonals(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not a knot complex: {0}")]
    NotAKnotComplex(String),

    #[error("d-invariant search exceeded the cap of {cap} U-powers")]
    NoTermination { cap: i64 },

    #[error("routes disagree: full tensor gives {full}, trefoil summand gives {fast}")]
    RouteMismatch { full: i64, fast: i64 },
}

pub type Result<T> = std::result::Result<T, Error>;
