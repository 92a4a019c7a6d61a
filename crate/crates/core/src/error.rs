use thiserror::Error;

/// Errors produced by the ftrees operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not unitary: {0}")]
    NotUnitary(String),

    #[error("target code does not refine the {0} code")]
    TargetNotARefinement(&'static str),

    #[error("element is not order preserving (not in F)")]
    NotInF,

    #[error("projection is not in the orbit of 1 (trace condition fails)")]
    NotInOmega2,

    #[error("realization search exhausted: {0}")]
    InternalSearchExhausted(String),

    #[error("truncation depth {depth} too shallow: need at least {required}")]
    DepthTooShallow { depth: usize, required: usize },

    #[error("zero projection has no tree embedding")]
    ZeroProjection,

    #[error("malformed pair: {0}")]
    MalformedPair(String),

    #[error("pair is not realizable by any projection in the orbit of 1")]
    NotRealizable,

    #[error("pair has no shared frontier vertex; its cylinder is a single point")]
    RigidPair,

    #[error("no separating projection found within generator radius {0}")]
    SearchExhausted(usize),

    #[error("elements are not pairwise distinct (positions {0} and {1})")]
    NotDistinct(usize, usize),

    #[error("normal form round trip failed: {0}")]
    NormalFormMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
