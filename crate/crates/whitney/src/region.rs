//! Whitney regions attached to grid cubes: the base selection, chain-based
//! augmentation, and their fattened unions.

use crate::decompose::{WhitneyDecomposition, WhitneyId, LAMBDA_DEFAULT, LAMBDA_MAX};
use crate::error::WhitneyError;
use crate::Result;
use geom::{map_indexed, Ball, BoundaryModel, CubeUnion, ExecMode, Point};
use grid::{CubeId, DyadicGrid};
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug)]
pub struct RegionConfig {
    /// Distance window: dist(I, Q) <= c0 * 2^{-k(Q)}.
    pub c0: f64,
    /// Coarse side of the level window: k_I >= k(Q) - m0.
    pub m0: i32,
    pub lambda: f64,
}

impl RegionConfig {
    /// Small constants that keep desk-scale regions legible.
    pub fn desk(d: usize) -> Self {
        RegionConfig {
            c0: 8.0 * (d as f64).sqrt(),
            m0: 2,
            lambda: LAMBDA_DEFAULT,
        }
    }

    /// Smallest desk reach at which every emitted Whitney cube is adopted by
    /// a region one grid level up; required for box/sawtooth coverage.
    pub fn covering(d: usize) -> Self {
        RegionConfig {
            c0: 16.0 * (d as f64).sqrt(),
            m0: 2,
            lambda: LAMBDA_DEFAULT,
        }
    }

    /// Faithful constants: c0 = 1000 sqrt(n) for the boundary dimension n.
    pub fn paper(d: usize) -> Self {
        RegionConfig {
            c0: 1000.0 * ((d - 1) as f64).sqrt(),
            m0: 2,
            lambda: LAMBDA_DEFAULT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda <= LAMBDA_MAX) {
            return Err(WhitneyError::Lambda(self.lambda));
        }
        if !(self.c0 > 0.0) || self.m0 < 0 {
            return Err(WhitneyError::OutOfRange(format!(
                "region constants c0 = {}, m0 = {} must be positive",
                self.c0, self.m0
            )));
        }
        Ok(())
    }
}

/// Supplier of in-domain ball chains between two points. Implementations live
/// above this crate; a straight-segment fallback is provided for star-shaped
/// geometry.
pub trait ChainSource: Sync {
    fn chain(&self, x: &Point, y: &Point) -> std::result::Result<Vec<Ball>, String>;
}

/// Radius of a segment-chain ball as a fraction of the boundary clearance.
/// Thin balls keep the chain corridor one cube wide; the achieved
/// clearance comparability is 1/CHAIN_ETA.
pub const CHAIN_ETA: f64 = 0.05;

/// Walks the straight segment, laying overlapping balls of radius
/// CHAIN_ETA times the boundary clearance. Adequate wherever the segment
/// stays well inside the domain.
pub struct SegmentChains<'a> {
    pub model: &'a BoundaryModel,
}

impl ChainSource for SegmentChains<'_> {
    fn chain(&self, x: &Point, y: &Point) -> std::result::Result<Vec<Ball>, String> {
        let mut z = x.clone();
        let mut out = Vec::new();
        for _ in 0..100_000 {
            let dz = self.model.distance(&z);
            if !(dz > 0.0) {
                return Err(format!("segment chain touched the boundary at {z:?}"));
            }
            let r = CHAIN_ETA * dz;
            let gap = z.dist(y);
            if gap <= r {
                let dy = self.model.distance(y);
                if !(dy > 0.0) {
                    return Err("segment chain endpoint on the boundary".into());
                }
                out.push(Ball::new(z, r));
                out.push(Ball::new(y.clone(), CHAIN_ETA * dy));
                return Ok(out);
            }
            out.push(Ball::new(z.clone(), r));
            // consecutive centers one radius apart so the balls overlap
            let dir = (y - &z).scale(1.0 / gap);
            z = &z + &dir.scale(r);
        }
        Err("segment chain exceeded the step budget".into())
    }
}

#[derive(Clone, Debug)]
pub struct WhitneyRegion {
    pub q: CubeId,
    /// Base selection by the level and distance windows.
    pub base: Vec<WhitneyId>,
    /// Augmented membership: base plus every cube met by the chains.
    pub members: Vec<WhitneyId>,
    /// Designated corkscrew point: center of a chosen base cube.
    pub x_q: Point,
    pub x_q_cube: WhitneyId,
    /// Achieved level spread max |k_I - k(Q)| over members.
    pub k_star: i32,
    /// Achieved distance multiplier max dist(I, Q) / 2^{-k(Q)}.
    pub k0: f64,
    pub lambda: f64,
}

impl WhitneyRegion {
    pub fn boxes(&self, decomp: &WhitneyDecomposition, factor: f64) -> Vec<geom::AxisBox> {
        self.members
            .iter()
            .map(|&id| decomp.get(id).cube.dilate(factor))
            .collect()
    }

    /// U_Q: union of (1+lambda)-fattened member cubes.
    pub fn u_q(&self, decomp: &WhitneyDecomposition) -> CubeUnion {
        CubeUnion::new(self.boxes(decomp, 1.0 + self.lambda))
    }

    /// U_Q^*: union of (1+2 lambda)-fattened member cubes.
    pub fn u_q_star(&self, decomp: &WhitneyDecomposition) -> CubeUnion {
        CubeUnion::new(self.boxes(decomp, 1.0 + 2.0 * self.lambda))
    }
}

/// Base Whitney selection for a grid cube.
pub fn w_q(
    grid: &DyadicGrid,
    decomp: &WhitneyDecomposition,
    q: CubeId,
    cfg: &RegionConfig,
) -> Result<Vec<WhitneyId>> {
    cfg.validate()?;
    let cube = grid.get(q)?;
    if cube.rim {
        return Err(WhitneyError::RimCube(q.0));
    }
    let cutoff = cfg.c0 * cube.side();
    let mut out = Vec::new();
    for k_i in cube.k - cfg.m0..=cube.k + 1 {
        for id in decomp.cubes_near(k_i, &cube.center, cutoff + cube.outer) {
            let w = decomp.get(id);
            if let Some(dist) = grid.dist_box_to_cube_within(&w.cube, q, cutoff) {
                if dist <= cutoff {
                    out.push(w.id);
                }
            }
        }
    }
    if out.is_empty() {
        return Err(WhitneyError::EmptyRegion {
            c0: cfg.c0,
            m0: cfg.m0,
        });
    }
    out.sort_unstable();
    Ok(out)
}

/// Deterministic corkscrew designation: largest member cube, then nearest to
/// the cube center, then lexicographic.
fn designate(
    grid: &DyadicGrid,
    decomp: &WhitneyDecomposition,
    q: CubeId,
    base: &[WhitneyId],
) -> (WhitneyId, Point) {
    let xq = &grid.cube(q).center;
    let mut best = base[0];
    for &id in &base[1..] {
        let a = decomp.get(id);
        let b = decomp.get(best);
        let da = a.cube.dist_to_point(xq);
        let db = b.cube.dist_to_point(xq);
        let better = (a.k, da).partial_cmp(&(b.k, db)).expect("finite keys")
            == std::cmp::Ordering::Less
            || ((a.k, da) == (b.k, db)
                && a.center().lex_cmp(&b.center()) == std::cmp::Ordering::Less);
        if better {
            best = id;
        }
    }
    (best, decomp.get(best).center())
}

/// Builds the full region: base set, chains from every base center to X_Q,
/// and cubes met along the way.
pub fn whitney_region(
    grid: &DyadicGrid,
    decomp: &WhitneyDecomposition,
    q: CubeId,
    cfg: &RegionConfig,
    chains: &dyn ChainSource,
) -> Result<WhitneyRegion> {
    let base = w_q(grid, decomp, q, cfg)?;
    let (x_q_cube, x_q) = designate(grid, decomp, q, &base);
    let mut members: BTreeSet<WhitneyId> = base.iter().copied().collect();
    for &id in &base {
        if id == x_q_cube {
            continue;
        }
        let from = decomp.get(id).center();
        for ball in chains.chain(&from, &x_q).map_err(WhitneyError::Chain)? {
            for met in decomp.cubes_meeting_ball(&ball) {
                members.insert(met);
            }
        }
    }
    let members: Vec<WhitneyId> = members.into_iter().collect();
    let cube = grid.cube(q);
    let mut k_star = 0;
    let mut k0 = 0.0f64;
    for &id in &members {
        let w = decomp.get(id);
        k_star = k_star.max((w.k - cube.k).abs());
        let dist = grid
            .dist_box_to_cube_within(&w.cube, q, f64::INFINITY)
            .unwrap_or(f64::INFINITY);
        k0 = k0.max(dist / cube.side());
    }
    Ok(WhitneyRegion {
        q,
        base,
        members,
        x_q,
        x_q_cube,
        k_star,
        k0,
        lambda: cfg.lambda,
    })
}

/// Regions for every interior cube of the grid, built in one sweep.
pub struct RegionSet {
    regions: Vec<Option<WhitneyRegion>>,
    pub lambda: f64,
}

impl RegionSet {
    pub fn get(&self, q: CubeId) -> Option<&WhitneyRegion> {
        self.regions.get(q.index()).and_then(|r| r.as_ref())
    }

    pub fn len(&self) -> usize {
        self.regions.iter().filter(|r| r.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn build_regions(
    grid: &DyadicGrid,
    decomp: &WhitneyDecomposition,
    cfg: &RegionConfig,
    chains: &dyn ChainSource,
    mode: ExecMode,
) -> Result<RegionSet> {
    let all: Vec<CubeId> = (0..grid.cube_count()).map(|i| CubeId(i as u32)).collect();
    build_regions_for(grid, decomp, cfg, chains, mode, &all)
}

/// Regions for a chosen id set only; other slots stay empty. Rim cubes are
/// skipped silently in either builder.
pub fn build_regions_for(
    grid: &DyadicGrid,
    decomp: &WhitneyDecomposition,
    cfg: &RegionConfig,
    chains: &dyn ChainSource,
    mode: ExecMode,
    ids: &[CubeId],
) -> Result<RegionSet> {
    cfg.validate()?;
    let built: Vec<Result<Option<(CubeId, WhitneyRegion)>>> = map_indexed(mode, ids.len(), |i| {
        let q = ids[i];
        if grid.get(q)?.rim {
            return Ok(None);
        }
        whitney_region(grid, decomp, q, cfg, chains).map(|r| Some((q, r)))
    });
    let mut regions: Vec<Option<WhitneyRegion>> = Vec::new();
    regions.resize_with(grid.cube_count(), || None);
    for r in built {
        if let Some((q, region)) = r? {
            regions[q.index()] = Some(region);
        }
    }
    Ok(RegionSet {
        regions,
        lambda: cfg.lambda,
    })
}
