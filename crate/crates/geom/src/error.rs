//! Error type shared by the geometry layer.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("point lies off the boundary set (distance {dist:.3e} exceeds tolerance {tol:.3e})")]
    OffBoundary { dist: f64, tol: f64 },

    #[error("radius {r} outside admissible range (0, {max}]")]
    RadiusRange { r: f64, max: f64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("sample spacing {spacing:.3e} too coarse for radius {r:.3e}")]
    SpacingTooCoarse { spacing: f64, r: f64 },

    #[error("surface ball belongs to a different boundary model")]
    ForeignSurfaceBall,

    #[error("unsupported operation: {0}")]
    Unsupported(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
