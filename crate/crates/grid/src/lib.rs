//! Dyadic decompositions of boundary models: exact lattice cells over flat
//! charts, greedy nested nets on curved sets, and the query layer used by the
//! region and functional crates.

pub mod build;
pub mod cube;
pub mod error;
pub mod grid;

pub use build::{build_grid, GridSpec};
pub use cube::{CubeFamily, CubeId, DyadicCube};
pub use error::GridError;
pub use grid::{CubeBallReport, DyadicGrid, GridStats, LevelStats, ThinFit};

pub type Result<T> = std::result::Result<T, GridError>;
