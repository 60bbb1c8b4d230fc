//! Crate-wide error type.

use thiserror::Error;

/// Errors shared by all modules.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("polyhedron is empty")]
    EmptyPolyhedron,

    #[error("generalized polyhedron is empty")]
    EmptySet,

    #[error("ambient dimension {dim} exceeds the configured cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("point lies outside the effective domain")]
    OutsideDomain,

    #[error("cell enumeration exceeded the cap of {cap} cells")]
    TooManyCells { cap: usize },

    #[error("criterion over an unbounded region is not finitely checkable when the quadratic term is nonzero")]
    UnboundedRegionWithQuadratic,

    #[error("set is unbounded; the boundary criterion requires a bounded set")]
    UnboundedSet,

    #[error("closure of the set is not contained in the domain")]
    ClosureNotInDomain,

    #[error("criterion requires dom f = R^n")]
    DomainNotFullSpace,

    #[error("base function is not certified {modulus}-Lipschitz: {detail}")]
    NotCertified { modulus: f64, detail: String },

    #[error("lambda must be positive, got {0}")]
    InvalidLambda(f64),

    #[error("radius must be positive, got {0}")]
    InvalidRadius(f64),

    #[error("segment endpoints coincide")]
    DegenerateSegment,

    #[error("domain has empty interior")]
    EmptyInterior,

    #[error("operation requires the euclidean norm, got {0}")]
    NonEuclideanNorm(&'static str),

    #[error("no finite objective values on the grid")]
    NoFinitePoints,

    #[error("invalid function data: {0}")]
    InvalidFunction(String),

    #[error("solver failed: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;
