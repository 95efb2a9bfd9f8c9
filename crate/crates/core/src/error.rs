use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("group order must be positive")]
    InvalidGroupOrder,
    #[error("{order} is not the order of a subgroup of C_{group}")]
    NotASubgroup { order: u64, group: u64 },
    #[error("subgroup of order {small} is not contained in the subgroup of order {big}")]
    NotIncluded { small: u64, big: u64 },
    #[error("character vector has {got} coefficients, expected {expected}")]
    CharacterLength { expected: u64, got: usize },
    #[error("malformed presentation: {0}")]
    MalformedPresentation(String),
    #[error("generator sets do not correspond: {0}")]
    GeneratorMismatch(String),
    #[error("completion did not stabilize up to length {max_len}; rank trajectory: {trajectory}")]
    NotStabilized { max_len: usize, trajectory: String },
    #[error("inconsistent presentation: the identity of object {object} collapses to zero")]
    InconsistentPresentation { object: u64 },
    #[error("torsion relation on word {word} has a non-monomial tail")]
    NonMonomialTorsion { word: String },
    #[error("unknown object {0}")]
    UnknownObject(u64),
    #[error("words are not parallel: {0}")]
    NotParallel(String),
    #[error("modules are defined over different rings")]
    RingMismatch,
    #[error("malformed module: {0}")]
    MalformedModule(String),
    #[error("action is not functorial on the composable pair ({first}, {second})")]
    NotFunctorial { first: usize, second: usize },
    #[error("malformed ring: {0}")]
    MalformedRing(String),
    #[error("unsupported format version {0}")]
    FormatVersion(u32),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
