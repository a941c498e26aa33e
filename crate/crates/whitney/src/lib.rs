//! Whitney decompositions, Whitney regions over a dyadic grid, Carleson
//! boxes, and sawtooth approximating domains.

pub mod decompose;
pub mod error;
pub mod faces;
pub mod region;
pub mod sawtooth;

pub use decompose::{
    decompose, decompose_focused, fatten, pairwise_fattening_check, FatteningReport, Side,
    SideFilter, WhitneyCube, WhitneyDecomposition, WhitneyId, DIST_HIGH, DIST_LOW, LAMBDA_DEFAULT,
    LAMBDA_MAX,
};
pub use error::WhitneyError;
pub use faces::extract_faces;
pub use region::{
    build_regions, build_regions_for, whitney_region, ChainSource, RegionConfig, RegionSet,
    SegmentChains, WhitneyRegion, CHAIN_ETA,
};
pub use sawtooth::{
    approx_domain, carleson_box, carleson_box_ball, sawtooth, SawtoothDomain, SawtoothKind,
};

pub type Result<T> = std::result::Result<T, WhitneyError>;
