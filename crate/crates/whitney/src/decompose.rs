//! Whitney decomposition of the complement of a boundary set, with exact
//! certified distances and the standard comparability window.

use crate::error::WhitneyError;
use crate::Result;
use geom::{AxisBox, Ball, BoundaryModel, Point, SpatialIndex};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

/// Lower and upper comparability bounds: admitted cubes satisfy
/// LOW * diam(I) <= dist(I, E) <= HIGH * diam(I).
pub const DIST_LOW: f64 = 10.0;
pub const DIST_HIGH: f64 = 40.0;

pub const LAMBDA_DEFAULT: f64 = 0.05;
pub const LAMBDA_MAX: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Interior,
    Exterior,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideFilter {
    Interior,
    Exterior,
    Both,
}

impl SideFilter {
    fn admits(self, side: Side) -> bool {
        match self {
            SideFilter::Interior => side == Side::Interior,
            SideFilter::Exterior => side == Side::Exterior,
            SideFilter::Both => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WhitneyId(pub u32);

impl WhitneyId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug)]
pub struct WhitneyCube {
    pub id: WhitneyId,
    pub k: i32,
    pub idx: Vec<i64>,
    pub cube: AxisBox,
    /// Exact distance from the cube to the boundary set.
    pub dist: f64,
    pub side: Side,
}

impl WhitneyCube {
    pub fn side_len(&self) -> f64 {
        (2.0f64).powi(-self.k)
    }

    pub fn center(&self) -> Point {
        self.cube.center()
    }
}

struct LevelIndex {
    ids: Vec<u32>,
    centers: SpatialIndex,
}

pub struct WhitneyDecomposition {
    cubes: Vec<WhitneyCube>,
    by_cell: HashMap<(i32, Vec<i64>), u32>,
    by_level: BTreeMap<i32, LevelIndex>,
    window: AxisBox,
    k_top: i32,
    k_floor: i32,
    /// Heights below this near the set are not covered by any admitted cube.
    collar: f64,
    dim: usize,
}

impl WhitneyDecomposition {
    pub fn cubes(&self) -> &[WhitneyCube] {
        &self.cubes
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn get(&self, id: WhitneyId) -> &WhitneyCube {
        &self.cubes[id.index()]
    }

    pub fn window(&self) -> &AxisBox {
        &self.window
    }

    pub fn k_top(&self) -> i32 {
        self.k_top
    }

    pub fn k_floor(&self) -> i32 {
        self.k_floor
    }

    pub fn collar(&self) -> f64 {
        self.collar
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dyadic levels that hold at least one cube, ascending.
    pub fn levels_present(&self) -> Vec<i32> {
        self.by_level.keys().copied().collect()
    }

    /// Ids of cubes at dyadic level k, ascending id order.
    pub fn level(&self, k: i32) -> Vec<WhitneyId> {
        match self.by_level.get(&k) {
            Some(l) => l.ids.iter().map(|&i| WhitneyId(i)).collect(),
            None => Vec::new(),
        }
    }

    /// The admitted cube whose half-open cell contains X, if any.
    pub fn locate(&self, x: &Point) -> Option<WhitneyId> {
        for k in self.k_top..=self.k_floor {
            let ell = (2.0f64).powi(-k);
            let idx: Vec<i64> = (0..self.dim)
                .map(|i| (x.coord(i) / ell).floor() as i64)
                .collect();
            if let Some(&id) = self.by_cell.get(&(k, idx)) {
                return Some(WhitneyId(id));
            }
        }
        None
    }

    /// Level-k cubes whose closure comes within `radius` of the point.
    pub fn cubes_near(&self, k: i32, x: &Point, radius: f64) -> Vec<WhitneyId> {
        let level = match self.by_level.get(&k) {
            Some(l) => l,
            None => return Vec::new(),
        };
        let slack = 0.5 * (self.dim as f64).sqrt() * (2.0f64).powi(-k);
        let reach = radius + slack;
        level
            .centers
            .in_ball(x, reach + 1e-12 * reach.abs())
            .into_iter()
            .map(|i| WhitneyId(level.ids[i]))
            .filter(|&id| self.get(id).cube.dist_to_point(x) <= radius)
            .collect()
    }

    /// All admitted cubes whose closure meets the closed ball.
    pub fn cubes_meeting_ball(&self, ball: &Ball) -> Vec<WhitneyId> {
        let mut out = Vec::new();
        for level in self.by_level.keys() {
            out.extend(self.cubes_near(*level, &ball.center, ball.r));
        }
        out.sort_unstable();
        out
    }

    /// Cubes whose closures touch the closure of `id`.
    pub fn neighbors(&self, id: WhitneyId) -> Vec<WhitneyId> {
        let me = self.get(id);
        let eps = 1e-9 * me.side_len();
        let mut out = Vec::new();
        for k in (me.k - 2).max(self.k_top)..=(me.k + 2).min(self.k_floor) {
            let ell = (2.0f64).powi(-k);
            let lo: Vec<i64> = (0..self.dim)
                .map(|i| ((me.cube.lo().coord(i) - eps) / ell).floor() as i64)
                .collect();
            let hi: Vec<i64> = (0..self.dim)
                .map(|i| ((me.cube.hi().coord(i) + eps) / ell).floor() as i64)
                .collect();
            let mut idx = lo.clone();
            'cells: loop {
                if let Some(&other) = self.by_cell.get(&(k, idx.clone())) {
                    if other != id.0 && me.cube.touches(&self.get(WhitneyId(other)).cube) {
                        out.push(WhitneyId(other));
                    }
                }
                let mut axis = 0;
                loop {
                    if axis == self.dim {
                        break 'cells;
                    }
                    idx[axis] += 1;
                    if idx[axis] <= hi[axis] {
                        break;
                    }
                    idx[axis] = lo[axis];
                    axis += 1;
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Concentric fattening; the only sanctioned dilation factors are 1 + lambda
/// and 1 + 2 lambda.
pub fn fatten(cube: &AxisBox, lambda: f64) -> Result<(AxisBox, AxisBox)> {
    if !(lambda > 0.0 && lambda <= LAMBDA_MAX) {
        return Err(WhitneyError::Lambda(lambda));
    }
    Ok((cube.dilate(1.0 + lambda), cube.dilate(1.0 + 2.0 * lambda)))
}

pub fn decompose(
    model: &BoundaryModel,
    window: &AxisBox,
    side: SideFilter,
    k_floor: i32,
) -> Result<WhitneyDecomposition> {
    decompose_impl(model, window, side, k_floor, None)
}

/// Decomposition refined only inside the pyramid over `focus`: a cell at
/// level k is subdivided only while it stays within `reach * 2^-k` of the
/// focus box. Every cube of the unfocused decomposition within that pyramid
/// is kept verbatim; coverage outside it is void, and the reported collar
/// meters only the strip near the set. Keeps deep floors affordable.
pub fn decompose_focused(
    model: &BoundaryModel,
    window: &AxisBox,
    side: SideFilter,
    k_floor: i32,
    focus: &AxisBox,
    reach: f64,
) -> Result<WhitneyDecomposition> {
    if !(reach > 0.0) {
        return Err(WhitneyError::OutOfRange(format!(
            "focus reach must be positive, got {reach}"
        )));
    }
    decompose_impl(model, window, side, k_floor, Some((focus, reach)))
}

fn decompose_impl(
    model: &BoundaryModel,
    window: &AxisBox,
    side: SideFilter,
    k_floor: i32,
    focus: Option<(&AxisBox, f64)>,
) -> Result<WhitneyDecomposition> {
    let d = model.dim();
    if window.dim() != d {
        return Err(WhitneyError::OutOfRange(format!(
            "window dimension {} does not match the model dimension {d}",
            window.dim()
        )));
    }
    if let Some((f, _)) = focus {
        if f.dim() != d {
            return Err(WhitneyError::OutOfRange(format!(
                "focus dimension {} does not match the model dimension {d}",
                f.dim()
            )));
        }
    }
    let k_top = (-window.min_side().log2()).ceil() as i32;
    if k_floor < k_top {
        return Err(WhitneyError::OutOfRange(format!(
            "floor level {k_floor} is coarser than the window top level {k_top}"
        )));
    }
    if k_floor - k_top > 24 {
        return Err(WhitneyError::OutOfRange(
            "more than 24 refinement levels is beyond desk scale".into(),
        ));
    }

    // no descendant of a cell can be admitted below this distance budget
    let floor_diam = (d as f64).sqrt() * (2.0f64).powi(-k_floor);
    let spawn_need = DIST_LOW * floor_diam;

    let mut raw: Vec<(i32, Vec<i64>, AxisBox, f64, Side)> = Vec::new();
    let mut collar = 0.0f64;
    let ell_top = (2.0f64).powi(-k_top);
    let lo: Vec<i64> = (0..d)
        .map(|i| (window.lo().coord(i) / ell_top).floor() as i64)
        .collect();
    let hi: Vec<i64> = (0..d)
        .map(|i| (window.hi().coord(i) / ell_top).ceil() as i64 - 1)
        .collect();
    let mut stack: Vec<(i32, Vec<i64>)> = Vec::new();
    let mut idx = lo.clone();
    'roots: loop {
        stack.push((k_top, idx.clone()));
        let mut axis = 0;
        loop {
            if axis == d {
                break 'roots;
            }
            idx[axis] += 1;
            if idx[axis] <= hi[axis] {
                break;
            }
            idx[axis] = lo[axis];
            axis += 1;
        }
    }
    while let Some((k, idx)) = stack.pop() {
        let cube = AxisBox::from_lattice(k, &idx);
        let (dist_lo, dist_hi) = model.dist_to_box(&cube);
        let diam = cube.diam();
        if dist_lo >= DIST_LOW * diam {
            // admitted; the parent failed the same test so maximality holds
            let center = cube.center();
            let tag = if model.is_interior(&center) {
                Side::Interior
            } else {
                Side::Exterior
            };
            if side.admits(tag) {
                let eps = 1e-9 * diam;
                let (dist4_lo, _) = model.dist_to_box(&cube.dilate(4.0));
                assert!(
                    dist4_lo + eps >= 4.0 * diam && dist_hi <= DIST_HIGH * diam + eps,
                    "emitted cube at level {k} breaks the comparability window: \
                     diam {diam}, dist {dist_lo}, dilated dist {dist4_lo}"
                );
                raw.push((k, idx, cube, dist_lo, tag));
            }
            continue;
        }
        if k >= k_floor {
            // resolution floor: the strip near the set stays uncovered
            collar = collar.max(dist_lo + diam);
            continue;
        }
        if dist_lo + diam < spawn_need {
            // hugging the set too tightly for any descendant to qualify
            collar = collar.max(dist_lo + diam);
            continue;
        }
        if let Some((f, reach)) = focus {
            // lateral holes outside the reach pyramid are not collar: the
            // collar only meters the uncovered strip hugging the set
            if cube.dist_to_box(f) > reach * (2.0f64).powi(-k) {
                continue;
            }
        }
        let mut child = vec![0i64; d];
        'children: loop {
            let cidx: Vec<i64> = (0..d).map(|i| 2 * idx[i] + child[i]).collect();
            stack.push((k + 1, cidx));
            let mut axis = 0;
            loop {
                if axis == d {
                    break 'children;
                }
                child[axis] += 1;
                if child[axis] <= 1 {
                    break;
                }
                child[axis] = 0;
                axis += 1;
            }
        }
    }
    raw.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let mut cubes = Vec::with_capacity(raw.len());
    let mut by_cell = HashMap::with_capacity(raw.len());
    let mut grouped: BTreeMap<i32, Vec<u32>> = BTreeMap::new();
    for (i, (k, idx, cube, dist, tag)) in raw.into_iter().enumerate() {
        by_cell.insert((k, idx.clone()), i as u32);
        grouped.entry(k).or_default().push(i as u32);
        cubes.push(WhitneyCube {
            id: WhitneyId(i as u32),
            k,
            idx,
            cube,
            dist,
            side: tag,
        });
    }
    let mut by_level = BTreeMap::new();
    for (k, ids) in grouped {
        let centers: Vec<Point> = ids.iter().map(|&i| cubes[i as usize].center()).collect();
        by_level.insert(
            k,
            LevelIndex {
                ids,
                centers: SpatialIndex::build(centers),
            },
        );
    }
    Ok(WhitneyDecomposition {
        cubes,
        by_cell,
        by_level,
        window: window.clone(),
        k_top,
        k_floor,
        collar,
        dim: d,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FatteningReport {
    pub lambda: f64,
    pub pairs_checked: usize,
    pub touching_pairs: usize,
    /// Smallest shrink factor at which some cube still meets a neighbor's
    /// fattened box; every tau strictly below this separates all pairs.
    pub min_meeting_tau: f64,
    /// Pairs violating "fattened interiors overlap iff the cubes touch".
    pub violations: Vec<(u32, u32)>,
}

/// Checks the two structural fattening facts over every nearby pair.
pub fn pairwise_fattening_check(
    decomp: &WhitneyDecomposition,
    lambda: f64,
) -> Result<FatteningReport> {
    if !(lambda > 0.0 && lambda <= LAMBDA_MAX) {
        return Err(WhitneyError::Lambda(lambda));
    }
    let mut pairs = 0usize;
    let mut touching = 0usize;
    let mut min_tau = 1.0f64;
    let mut violations = Vec::new();
    for a in decomp.cubes() {
        let astar = a.cube.dilate(1.0 + lambda);
        // distance comparability caps a near neighbor's side at ~4x this one
        let radius = a.cube.diam() + 9.0 * lambda * a.cube.max_side();
        for dk in -3i32..=3 {
            for id in decomp.cubes_near(a.k + dk, &a.center(), radius) {
                if id.0 <= a.id.0 {
                    continue;
                }
                let b = decomp.get(id);
                check_pair(
                    a, b, &astar, lambda, &mut pairs, &mut touching, &mut min_tau,
                    &mut violations,
                );
            }
        }
    }
    Ok(FatteningReport {
        lambda,
        pairs_checked: pairs,
        touching_pairs: touching,
        min_meeting_tau: min_tau,
        violations,
    })
}

#[allow(clippy::too_many_arguments)]
fn check_pair(
    a: &WhitneyCube,
    b: &WhitneyCube,
    astar: &AxisBox,
    lambda: f64,
    pairs: &mut usize,
    touching: &mut usize,
    min_tau: &mut f64,
    violations: &mut Vec<(u32, u32)>,
) {
    let reach = lambda * (a.cube.max_side() + b.cube.max_side());
    if a.cube.dist_to_box(&b.cube) > reach {
        return;
    }
    *pairs += 1;
    let bstar = b.cube.dilate(1.0 + lambda);
    let touch = a.cube.touches(&b.cube);
    let overlap = astar.interiors_intersect(&bstar);
    if touch {
        *touching += 1;
    }
    if overlap != touch {
        violations.push((a.id.0, b.id.0));
    }
    *min_tau = min_tau.min(meeting_tau(&b.cube, astar));
    *min_tau = min_tau.min(meeting_tau(&a.cube, &bstar));
}

/// Minimal tau at which the concentric shrink tau*J still meets `other`;
/// clamped to 1 when even the full cube stays clear.
fn meeting_tau(j: &AxisBox, other: &AxisBox) -> f64 {
    let c = j.center();
    let mut tau = 0.0f64;
    for i in 0..j.dim() {
        let half = 0.5 * j.side(i);
        let lo = other.lo().coord(i);
        let hi = other.hi().coord(i);
        let ci = c.coord(i);
        let need = if ci < lo {
            (lo - ci) / half
        } else if ci > hi {
            (ci - hi) / half
        } else {
            0.0
        };
        tau = tau.max(need);
    }
    tau.min(1.0)
}
