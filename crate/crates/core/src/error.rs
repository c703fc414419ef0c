use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring descriptor `{0}`")]
    InvalidRing(String),

    #[error("unsupported ring {ring}: {reason}")]
    UnsupportedRing { ring: String, reason: String },

    #[error("witness search bound {0} exhausted without certifying a result")]
    SearchBoundExceeded(u64),

    #[error("invalid root system type: {0}")]
    InvalidType(String),

    #[error("rank too small for a proper terminal subsystem")]
    RankTooSmall,

    #[error("opposite roots have no unipotent commutator expansion")]
    OppositeRoots,

    #[error("root set is not special")]
    NotSpecial,

    #[error("root set is not supported by the collector: {0}")]
    UnsupportedRootSet(String),

    #[error("no stable-rank witness for the row ({c}, {d})")]
    NoWitness { c: String, d: String },

    #[error("representation {rep} is not available for type {system}")]
    IncompatibleRep { rep: String, system: String },

    #[error("collection left its filtration: {0}")]
    CollectionBound(String),

    #[error("element {0} is not a unit")]
    NotUnit(String),

    #[error("{0:?} is not a root of the system")]
    UnknownRoot(Vec<i32>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
