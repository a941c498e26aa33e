//! Interior access structure of a domain: corkscrew points, Harnack
//! chains, and per-scale diagnostics built on a Whitney decomposition.

pub mod chain;
pub mod corkscrew;
pub mod diag;
mod error;
pub mod route;
pub mod slit;

pub use chain::{
    chain_along, harnack_chain, harnack_chain_via, verify_chain, ChainReport, Clearance,
    HarnackChain, WhitneyChains, CHAIN_STEP_ETA,
};
pub use corkscrew::{
    certify_corkscrew, corkscrew, cube_corkscrew, Candidates, CorkscrewConfig, CorkscrewResult,
    CubeCorkscrew,
};
pub use diag::{nta_diagnostics, DiagRow, NtaReport};
pub use error::{ConnectivityError, Result};
pub use slit::SlitPlane;
