//! Errors raised while building or querying the cube hierarchy.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("regularity check failed at scale {scale:.3e} (constant {constant:.3e})")]
    AdrFailure { scale: f64, constant: f64 },

    #[error("unknown cube id {0}")]
    UnknownCube(u32),

    #[error("family is not pairwise disjoint: cube {child} lies inside cube {ancestor}")]
    OverlappingFamily { child: u32, ancestor: u32 },

    #[error("invalid grid spec: {0}")]
    InvalidSpec(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error(transparent)]
    Geom(#[from] geom::GeomError),
}
