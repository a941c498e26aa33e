//! Ambient-space primitives for the laboratory: points, boxes, balls,
//! boundary-set models with surface measure and distance oracles, boundary
//! sampling, and the regularity (ADR) verifier. Everything here is immutable
//! after construction and safe to share across workers.

pub mod ball;
pub mod boundary;
pub mod boxes;
pub mod error;
pub mod index;
pub mod measure;
pub mod par;
pub mod point;
pub mod sample;
pub mod serial;

pub use ball::{Ball, SurfaceBall};
pub use boundary::{BoundaryKind, BoundaryModel, Face, Frame, GraphShape};
pub use boxes::{AxisBox, CubeUnion};
pub use error::GeomError;
pub use index::SpatialIndex;
pub use measure::{adr_check, distance_to_boundary, sigma_of_ball, AdrReport};
pub use par::{configure_workers, map_indexed, pairwise_sum, sum_indexed, ExecMode};
pub use point::Point;
pub use sample::{sample_boundary, SampleCloud};

pub type Result<T> = std::result::Result<T, GeomError>;
