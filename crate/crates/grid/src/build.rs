//! Grid construction: exact lattice cells on flat charts, greedy nested nets
//! everywhere else.

use crate::cube::{CubeId, DyadicCube};
use crate::error::GridError;
use crate::grid::DyadicGrid;
use crate::Result;
use geom::{adr_check, sample_boundary, AxisBox, BoundaryModel, ExecMode, Frame, Point, SpatialIndex};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridSpec {
    pub k_min: i32,
    pub k_max: i32,
    /// Chart window; required for unbounded models, rejected for bounded ones.
    pub window: Option<Frame>,
    /// Target boundary-sample spacing; defaults to 2^{-k_max}/4.
    pub sample_spacing: Option<f64>,
    pub seed: u64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            k_min: 0,
            k_max: 4,
            window: None,
            sample_spacing: None,
            seed: 0,
        }
    }
}

const ADR_CONSTANT_CEILING: f64 = 100.0;
const GUARD_CUBES: f64 = 4.0;

pub fn build_grid(model: &BoundaryModel, spec: &GridSpec) -> Result<DyadicGrid> {
    if spec.k_min > spec.k_max {
        return Err(GridError::InvalidSpec("k_min must not exceed k_max".into()));
    }
    if spec.k_max - spec.k_min > 12 {
        return Err(GridError::InvalidSpec(
            "more than 12 generations is beyond desk scale".into(),
        ));
    }
    if let Some(diam) = model.diameter() {
        if (2.0f64).powi(-spec.k_min) > 2.0 * diam {
            return Err(GridError::InvalidSpec(format!(
                "coarsest scale 2^-({}) exceeds twice the set diameter {diam}",
                spec.k_min
            )));
        }
    }
    let chart_model = matches!(
        model,
        BoundaryModel::Hyperplane { .. } | BoundaryModel::LipschitzGraph { .. }
    );
    let mut grid = if chart_model {
        build_lattice(model, spec)?
    } else {
        if spec.window.is_some() {
            return Err(GridError::InvalidSpec(
                "bounded models take no window".into(),
            ));
        }
        build_greedy(model, spec)?
    };
    adr_pre_check(model, &grid, spec)?;
    finalize_constants(&mut grid);
    Ok(grid)
}

fn snap_down(x: f64, s: f64) -> f64 {
    (x / s).floor() * s
}

fn snap_up(x: f64, s: f64) -> f64 {
    (x / s).ceil() * s
}

fn chart_of(p: &Point, n: usize) -> Vec<f64> {
    p.as_slice()[..n].to_vec()
}

fn build_lattice(model: &BoundaryModel, spec: &GridSpec) -> Result<DyadicGrid> {
    let n = model.n();
    let frame = spec
        .window
        .as_ref()
        .ok_or_else(|| GridError::InvalidSpec("unbounded model needs a window".into()))?;
    if frame.chart_center.len() != n {
        return Err(GridError::InvalidSpec(
            "window chart center has wrong dimension".into(),
        ));
    }
    let coarse = (2.0f64).powi(-spec.k_min);
    let raw = frame.chart_box();
    let window = AxisBox::new(
        Point::new(
            &(0..n)
                .map(|i| snap_down(raw.lo().coord(i), coarse))
                .collect::<Vec<_>>(),
        ),
        Point::new(
            &(0..n)
                .map(|i| snap_up(raw.hi().coord(i), coarse))
                .collect::<Vec<_>>(),
        ),
    );
    let guard = GUARD_CUBES * coarse;
    let guarded = AxisBox::new(
        Point::new(
            &(0..n)
                .map(|i| window.lo().coord(i) - guard)
                .collect::<Vec<_>>(),
        ),
        Point::new(
            &(0..n)
                .map(|i| window.hi().coord(i) + guard)
                .collect::<Vec<_>>(),
        ),
    );

    // Sample spacing: a power of two so sampling cells align with every level.
    let req = spec
        .sample_spacing
        .unwrap_or((2.0f64).powi(-(spec.k_max + 2)));
    if !(req > 0.0) {
        return Err(GridError::InvalidSpec("sample spacing must be positive".into()));
    }
    let m = (-req.log2()).ceil() as i32;
    if m < spec.k_max + 1 {
        return Err(GridError::InvalidSpec(format!(
            "sample spacing {req} too coarse for finest level k={}",
            spec.k_max
        )));
    }
    let h = (2.0f64).powi(-m);

    let patch = match model {
        BoundaryModel::Hyperplane { d, .. } => {
            BoundaryModel::hyperplane_patch(*d, guarded.clone())
        }
        BoundaryModel::LipschitzGraph { d, shape, .. } => {
            BoundaryModel::lipschitz_graph(*d, shape.clone(), Some(guarded.clone()))
        }
        _ => unreachable!("lattice path only for chart models"),
    };
    let cloud = sample_boundary(&patch, h, spec.seed)?;
    let samples = cloud.points;
    let weights = cloud.weights;

    let mut cubes: Vec<DyadicCube> = Vec::new();
    let mut levels: Vec<Vec<CubeId>> = Vec::new();
    let mut ids: HashMap<(i32, Vec<i64>), CubeId> = HashMap::new();
    for k in spec.k_min..=spec.k_max {
        let ell = (2.0f64).powi(-k);
        let lo_idx: Vec<i64> = (0..n)
            .map(|i| (guarded.lo().coord(i) / ell).round() as i64)
            .collect();
        let hi_idx: Vec<i64> = (0..n)
            .map(|i| (guarded.hi().coord(i) / ell).round() as i64)
            .collect();
        let mut level_ids = Vec::new();
        let mut idx = lo_idx.clone();
        'cells: loop {
            let cell = AxisBox::from_lattice(k, &idx);
            let chart_center: Vec<f64> = (0..n)
                .map(|i| (idx[i] as f64 + 0.5) * ell)
                .collect();
            let center = model.chart_to_ambient(&chart_center)?;
            let parent = if k > spec.k_min {
                let pidx: Vec<i64> = idx.iter().map(|&i| i.div_euclid(2)).collect();
                Some(ids[&(k - 1, pidx)])
            } else {
                None
            };
            let rim = !((0..n).all(|i| {
                cell.lo().coord(i) >= window.lo().coord(i) - 1e-12
                    && cell.hi().coord(i) <= window.hi().coord(i) + 1e-12
            }));
            let id = CubeId(cubes.len() as u32);
            ids.insert((k, idx.clone()), id);
            if let Some(p) = parent {
                cubes[p.index()].children.push(id);
            }
            cubes.push(DyadicCube {
                id,
                k,
                parent,
                children: Vec::new(),
                center,
                r: 0.5 * ell,
                outer: 0.0,
                members: Vec::new(),
                sigma: 0.0,
                rim,
                chart_cell: Some(cell),
                bbox: None,
            });
            level_ids.push(id);
            // odometer
            let mut axis = 0;
            loop {
                if axis == n {
                    break 'cells;
                }
                idx[axis] += 1;
                if idx[axis] < hi_idx[axis] {
                    break;
                }
                idx[axis] = lo_idx[axis];
                axis += 1;
            }
        }
        levels.push(level_ids);
    }

    // Leaf membership by exact floor-cell lookup.
    let ell_max = (2.0f64).powi(-spec.k_max);
    let mut leaf_members: HashMap<CubeId, Vec<u32>> = HashMap::new();
    for (si, p) in samples.iter().enumerate() {
        let chart = chart_of(p, n);
        let idx: Vec<i64> = chart.iter().map(|c| (c / ell_max).floor() as i64).collect();
        let id = *ids
            .get(&(spec.k_max, idx))
            .expect("every sample falls in an enumerated leaf cell");
        leaf_members.entry(id).or_default().push(si as u32);
    }
    roll_up(&mut cubes, &levels, leaf_members, &samples, &weights);

    let sample_index = SpatialIndex::build(samples.clone());
    Ok(DyadicGrid::assemble(
        model.clone(),
        spec.clone(),
        cubes,
        spec.k_min,
        levels,
        samples,
        weights,
        sample_index,
    ))
}

fn build_greedy(model: &BoundaryModel, spec: &GridSpec) -> Result<DyadicGrid> {
    let req = spec
        .sample_spacing
        .unwrap_or((2.0f64).powi(-(spec.k_max + 2)));
    let (samples, weights) = match model.cloud() {
        Some((pts, ws, _)) => (pts.to_vec(), ws.to_vec()),
        None => {
            let cloud = sample_boundary(model, req, spec.seed)?;
            (cloud.points, cloud.weights)
        }
    };
    let d = model.dim();
    let mut order: Vec<u32> = (0..samples.len() as u32).collect();
    order.sort_by(|&a, &b| samples[a as usize].lex_cmp(&samples[b as usize]));

    let mut cubes: Vec<DyadicCube> = Vec::new();
    let mut levels: Vec<Vec<CubeId>> = Vec::new();
    let mut prev_net: Vec<u32> = Vec::new();
    let mut net_cube: HashMap<u32, CubeId> = HashMap::new();
    for k in spec.k_min..=spec.k_max {
        let sep = (2.0f64).powi(-k);
        // Nested nets: previous net points stay, then greedy lex extension.
        let mut net: Vec<u32> = prev_net.clone();
        let mut hash: HashMap<Vec<i64>, Vec<u32>> = HashMap::new();
        let cell = |p: &Point| -> Vec<i64> {
            (0..d).map(|i| (p.coord(i) / sep).floor() as i64).collect()
        };
        let admit = |si: u32, hash: &mut HashMap<Vec<i64>, Vec<u32>>| -> bool {
            let p = &samples[si as usize];
            let c = cell(p);
            // scan the 3^d cell neighborhood for a separation violator
            let mut offs = vec![-1i64; d];
            loop {
                let key: Vec<i64> = (0..d).map(|i| c[i] + offs[i]).collect();
                if let Some(list) = hash.get(&key) {
                    for &other in list {
                        if samples[other as usize].dist(p) < sep {
                            return false;
                        }
                    }
                }
                let mut axis = 0;
                loop {
                    if axis == d {
                        hash.entry(c).or_default().push(si);
                        return true;
                    }
                    offs[axis] += 1;
                    if offs[axis] <= 1 {
                        break;
                    }
                    offs[axis] = -1;
                    axis += 1;
                }
            }
        };
        let seeded: std::collections::HashSet<u32> = prev_net.iter().copied().collect();
        for &si in &prev_net.clone() {
            let ok = admit(si, &mut hash);
            debug_assert!(ok, "nested net points are separated by construction");
        }
        for &si in &order {
            if seeded.contains(&si) {
                continue;
            }
            if admit(si, &mut hash) {
                net.push(si);
            }
        }

        // Parent assignment against the previous level's net.
        let parent_of: Vec<Option<CubeId>> = if k == spec.k_min {
            vec![None; net.len()]
        } else {
            let parent_pts: Vec<Point> = prev_net
                .iter()
                .map(|&si| samples[si as usize].clone())
                .collect();
            let kd = SpatialIndex::build(parent_pts);
            net.iter()
                .map(|&si| {
                    let p = &samples[si as usize];
                    let (i0, d0) = kd.nearest(p);
                    let mut best = i0;
                    for cand in kd.in_ball(p, d0 * (1.0 + 1e-12) + 1e-300) {
                        if kd.point(cand).lex_cmp(kd.point(best)).is_lt() {
                            best = cand;
                        }
                    }
                    Some(net_cube[&prev_net[best]])
                })
                .collect()
        };

        let mut level_ids = Vec::new();
        let mut new_net_cube = HashMap::new();
        for (ni, &si) in net.iter().enumerate() {
            let id = CubeId(cubes.len() as u32);
            if let Some(p) = parent_of[ni] {
                cubes[p.index()].children.push(id);
            }
            cubes.push(DyadicCube {
                id,
                k,
                parent: parent_of[ni],
                children: Vec::new(),
                center: samples[si as usize].clone(),
                r: 0.0,
                outer: 0.0,
                members: Vec::new(),
                sigma: 0.0,
                rim: false,
                chart_cell: None,
                bbox: None,
            });
            level_ids.push(id);
            new_net_cube.insert(si, id);
        }
        levels.push(level_ids);
        prev_net = net;
        net_cube = new_net_cube;
    }

    // Leaf assignment: nearest finest net point, lex tie-break.
    let leaf_pts: Vec<Point> = prev_net
        .iter()
        .map(|&si| samples[si as usize].clone())
        .collect();
    let kd = SpatialIndex::build(leaf_pts);
    let mut leaf_members: HashMap<CubeId, Vec<u32>> = HashMap::new();
    for (si, p) in samples.iter().enumerate() {
        let (i0, d0) = kd.nearest(p);
        let mut best = i0;
        for cand in kd.in_ball(p, d0 * (1.0 + 1e-12) + 1e-300) {
            if kd.point(cand).lex_cmp(kd.point(best)).is_lt() {
                best = cand;
            }
        }
        leaf_members
            .entry(net_cube[&prev_net[best]])
            .or_default()
            .push(si as u32);
    }
    roll_up(&mut cubes, &levels, leaf_members, &samples, &weights);

    // Inner radii from the nearest non-member sample, capped at the scale.
    let sample_index = SpatialIndex::build(samples.clone());
    for cube in &mut cubes {
        let cap = cube.side();
        let r = sample_index
            .nearest_filtered(&cube.center, |i| !cube.is_member(i as u32))
            .map(|(_, dist)| (0.999 * dist).min(cap))
            .unwrap_or(cap);
        cube.r = r;
    }

    Ok(DyadicGrid::assemble(
        model.clone(),
        spec.clone(),
        cubes,
        spec.k_min,
        levels,
        samples,
        weights,
        sample_index,
    ))
}

/// Fills members, sigma, and outer radius bottom-up from leaf assignments.
fn roll_up(
    cubes: &mut [DyadicCube],
    levels: &[Vec<CubeId>],
    mut leaf_members: HashMap<CubeId, Vec<u32>>,
    samples: &[Point],
    weights: &[f64],
) {
    for level in levels.iter().rev() {
        for &id in level {
            let mut members = leaf_members.remove(&id).unwrap_or_default();
            let children = cubes[id.index()].children.clone();
            for c in children {
                members.extend_from_slice(&cubes[c.index()].members);
            }
            members.sort_unstable();
            let sigma: f64 = members.iter().map(|&i| weights[i as usize]).sum();
            let center = cubes[id.index()].center.clone();
            let outer = members
                .iter()
                .map(|&i| center.dist(&samples[i as usize]))
                .fold(0.0, f64::max);
            let bbox = member_bbox(&members, samples);
            let cube = &mut cubes[id.index()];
            cube.members = members;
            cube.sigma = sigma;
            cube.outer = outer;
            cube.bbox = bbox;
        }
    }
}

fn adr_pre_check(model: &BoundaryModel, grid: &DyadicGrid, spec: &GridSpec) -> Result<()> {
    let diam = model.diameter().unwrap_or(f64::INFINITY);
    let centers: Vec<Point> = grid
        .level(spec.k_min)
        .iter()
        .filter(|&&id| !grid.cube(id).rim)
        .take(24)
        .map(|&id| grid.cube(id).center.clone())
        .collect();
    if centers.is_empty() {
        return Ok(());
    }
    for k in spec.k_min..=spec.k_max {
        let r = (2.0f64).powi(-k);
        if r > diam {
            continue;
        }
        let report = adr_check(model, &centers, &[r], ExecMode::Sequential)?;
        if !report.violations.is_empty() || report.constant > ADR_CONSTANT_CEILING {
            return Err(GridError::AdrFailure {
                scale: r,
                constant: report.constant,
            });
        }
    }
    Ok(())
}

fn finalize_constants(grid: &mut DyadicGrid) {
    grid.compute_achieved_constants();
}

fn member_bbox(members: &[u32], samples: &[Point]) -> Option<AxisBox> {
    let first = samples.get(*members.first()? as usize)?;
    let d = first.dim();
    let mut lo = first.as_slice().to_vec();
    let mut hi = lo.clone();
    for &i in &members[1..] {
        let p = &samples[i as usize];
        for a in 0..d {
            lo[a] = lo[a].min(p.coord(a));
            hi[a] = hi[a].max(p.coord(a));
        }
    }
    Some(AxisBox::new(Point::new(&lo), Point::new(&hi)))
}
