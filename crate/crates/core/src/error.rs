use thiserror::Error;

use crate::rotnum::RotBound;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("displacement roots cannot be separated at tolerance {tol:e}: {detail}")]
    AmbiguousAtTolerance { tol: f64, detail: String },

    #[error("map has no fixed point and is not a non-elliptic Mobius map")]
    NoFixedPoint,

    #[error("g_t has a fixed point in the interval at t = {t}")]
    FixedPointInInterval { t: f64 },

    #[error("orbit is not periodic: {0}")]
    NotPeriodic(String),

    #[error("g exchanges the fixed points of f; no contraction power can be certified")]
    ExchangedFixedPoints,

    #[error("no contraction power found up to N = {max_power}")]
    NoContractionPower { max_power: u32 },

    #[error("tolerance {tol:e} not reached after {iterations} iterations; best enclosure [{}, {}]", best.lo, best.hi)]
    ToleranceNotReached {
        tol: f64,
        iterations: u64,
        best: Box<RotBound>,
    },

    #[error("operation not supported for {0} lifts")]
    UnsupportedKind(&'static str),

    #[error("lift is not an integer translation: displacement spread {spread:e} exceeds {tol:e}")]
    NotIdentityLift { spread: f64, tol: f64 },

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("invalid pants decomposition: {0}")]
    InvalidPants(String),

    #[error("cannot parse word: {0}")]
    WordParse(String),

    #[error("unknown generator {0}")]
    UnknownGenerator(String),

    #[error("relator not satisfied: {0}")]
    RelatorNotSatisfied(String),

    #[error("representation has no verified relator")]
    NotClosed,

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("commutator is not hyperbolic (trace {trace}); lambda too small")]
    NotDiscreteRange { trace: f64 },

    #[error("word {0} does not act hyperbolically")]
    NotHyperbolic(String),

    #[error("fixed points of {0} and {1} coincide within tolerance")]
    CoincidentFixedPoints(String, String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("flow does not commute with the bending curve (defect {defect:e})")]
    NotCommuting { defect: f64 },

    #[error("generators have no common fixed point at {0}")]
    NoGlobalFixedPoint(String),

    #[error("euler number jumps from {before} to {after} between t = {t_before} and t = {t_after}")]
    DiscontinuityDetected {
        t_before: f64,
        t_after: f64,
        before: i64,
        after: i64,
    },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
