use thiserror::Error;

use crate::simplex::{Simplex, VertexId};

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed simplex: {0}")]
    MalformedSimplex(String),

    #[error("vertex {0} already belongs to the complex")]
    VertexCollision(VertexId),

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("simplex list is not closed under taking faces: {missing} is missing")]
    NotClosed { missing: Simplex },

    #[error("{0} is not a free face")]
    NotAFreeFace(Simplex),

    #[error("{0} is not in the complex")]
    NotInComplex(Simplex),

    #[error("not a subcomplex: {0}")]
    NotASubcomplex(String),

    #[error("boundary of a 0-simplex is undefined in the unaugmented complex")]
    DegreeUnderflow,

    #[error("{0} is not a prime below 2^31")]
    InvalidPrime(u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("permutation domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("map is not a simplicial isomorphism: {0}")]
    NotAnIsomorphism(String),

    #[error("group closure exceeded {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("no irreducible polynomial shipped for GF({p}^{k})")]
    NoIrreduciblePolynomial { p: u64, k: u32 },

    #[error("property claimed monotone but h({smaller:#x}) = 1 and h({larger:#x}) = 0")]
    NotMonotone { smaller: u64, larger: u64 },

    #[error("universe with {edges} edges exceeds the limit of {limit}")]
    UniverseTooLarge { edges: usize, limit: usize },

    #[error("tree cannot be normalized: {0}")]
    CannotNormalize(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unknown property `{0}`")]
    UnknownProperty(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
