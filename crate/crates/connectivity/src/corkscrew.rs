//! Corkscrew points: for a surface ball, an interior point whose own
//! ball fills a definite fraction of the surface ball on the requested
//! side. The search scans candidate points and rays from the surface
//! ball center, then certifies the winner against the distance oracle.

use geom::{AxisBox, Ball, BoundaryModel, Point, SurfaceBall};
use grid::{CubeId, DyadicGrid};
use serde::Serialize;
use whitney::{Side, WhitneyDecomposition};

use crate::error::{ConnectivityError, Result};

#[derive(Clone, Copy, Debug)]
pub struct CorkscrewConfig {
    /// Smallest admissible fraction c with B(X, c r) inside the ball and
    /// the domain side.
    pub c_min: f64,
    /// Grid points per candidate ray before local refinement.
    pub ray_steps: usize,
    /// Certification directions sampled on the sphere around the winner.
    pub samples: u32,
    pub seed: u64,
}

impl Default for CorkscrewConfig {
    fn default() -> Self {
        CorkscrewConfig {
            c_min: 0.05,
            ray_steps: 8,
            samples: 64,
            seed: 7,
        }
    }
}

/// Where the search draws candidate points from.
pub enum Candidates<'a> {
    /// Centers of Whitney cubes on the requested side near the ball.
    Whitney(&'a WhitneyDecomposition),
    /// Explicit points, for domains carrying no decomposition.
    Points(&'a [Point]),
}

#[derive(Clone, Debug, Serialize)]
pub struct CorkscrewResult {
    pub delta: SurfaceBall,
    pub point: Point,
    /// Achieved fraction: B(point, c * delta.r) lies in the surface ball
    /// intersected with the requested side (and the clip, if any).
    pub c: f64,
    pub side: Side,
    /// Directions sampled during certification.
    pub certified_samples: u32,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn unit_f64(state: &mut u64) -> f64 {
    (splitmix64(state) >> 11) as f64 / (1u64 << 53) as f64
}

/// Deterministic unit direction via Box-Muller on a splitmix64 stream.
fn direction(dim: usize, state: &mut u64) -> Point {
    loop {
        let mut coords = Vec::with_capacity(dim);
        while coords.len() < dim {
            let u1 = unit_f64(state).max(1e-300);
            let u2 = unit_f64(state);
            let m = (-2.0 * u1.ln()).sqrt();
            coords.push(m * (std::f64::consts::TAU * u2).cos());
            if coords.len() < dim {
                coords.push(m * (std::f64::consts::TAU * u2).sin());
            }
        }
        let norm = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-9 {
            let coords: Vec<f64> = coords.iter().map(|c| c / norm).collect();
            return Point::new(&coords);
        }
    }
}

fn on_side(model: &BoundaryModel, side: Side, p: &Point) -> bool {
    match side {
        Side::Interior => model.is_interior(p),
        Side::Exterior => !model.is_interior(p) && model.distance(p) > 0.0,
    }
}

/// Fraction achieved at `p`, or None when `p` misses the side, the clip,
/// or the surface ball.
fn achieved_c(
    model: &BoundaryModel,
    delta: &SurfaceBall,
    side: Side,
    clip: Option<&BoundaryModel>,
    p: &Point,
) -> Option<f64> {
    if !on_side(model, side, p) {
        return None;
    }
    let mut room = model.distance(p);
    if let Some(host) = clip {
        if !host.is_interior(p) {
            return None;
        }
        room = room.min(host.distance(p));
    }
    let slack = delta.r - delta.center.dist(p);
    let c = room.min(slack) / delta.r;
    if c > 0.0 {
        Some(c)
    } else {
        None
    }
}

/// True when `cand` beats `best` under the tie-break order:
/// larger c, then larger clearance, then lexicographically smaller point.
fn better(
    model: &BoundaryModel,
    best: Option<&(f64, Point)>,
    cand_c: f64,
    cand_p: &Point,
) -> bool {
    let (bc, bp) = match best {
        None => return true,
        Some(t) => (t.0, &t.1),
    };
    if cand_c > bc + 1e-15 {
        return true;
    }
    if cand_c < bc - 1e-15 {
        return false;
    }
    let (dc, db) = (model.distance(cand_p), model.distance(bp));
    if dc > db + 1e-15 {
        return true;
    }
    if dc < db - 1e-15 {
        return false;
    }
    for i in 0..cand_p.dim() {
        if cand_p.coord(i) < bp.coord(i) - 1e-15 {
            return true;
        }
        if cand_p.coord(i) > bp.coord(i) + 1e-15 {
            return false;
        }
    }
    false
}

fn collect_candidates(
    model: &BoundaryModel,
    delta: &SurfaceBall,
    side: Side,
    cands: &Candidates,
) -> Vec<Point> {
    match cands {
        Candidates::Points(pts) => pts.to_vec(),
        Candidates::Whitney(decomp) => {
            let mut out = Vec::new();
            for k in decomp.levels_present() {
                for id in decomp.cubes_near(k, &delta.center, delta.r) {
                    let cube = decomp.get(id);
                    if cube.side == side {
                        out.push(cube.cube.center());
                    }
                }
            }
            let _ = model;
            out
        }
    }
}

/// Certify that `point` is a corkscrew point for `delta`: recompute the
/// fraction from the distance oracles and probe the sphere around the
/// point for side violations. Independent of the search.
pub fn certify_corkscrew(
    model: &BoundaryModel,
    delta: &SurfaceBall,
    side: Side,
    clip: Option<&BoundaryModel>,
    point: &Point,
    samples: u32,
    seed: u64,
) -> Result<f64> {
    let c = achieved_c(model, delta, side, clip, point).ok_or_else(|| {
        ConnectivityError::Certification(format!(
            "point {:?} is not admissible for the surface ball",
            point
        ))
    })?;
    let mut state = seed ^ 0xc0ffee;
    let probe_r = 0.98 * c * delta.r;
    for i in 0..samples {
        let u = direction(point.dim(), &mut state);
        let coords: Vec<f64> = (0..point.dim())
            .map(|j| point.coord(j) + probe_r * u.coord(j))
            .collect();
        let p = Point::new(&coords);
        if !on_side(model, side, &p) {
            return Err(ConnectivityError::Certification(format!(
                "probe {i} at {:?} crossed to the wrong side",
                p
            )));
        }
        if let Some(host) = clip {
            if !host.is_interior(&p) {
                return Err(ConnectivityError::Certification(format!(
                    "probe {i} at {:?} left the clip domain",
                    p
                )));
            }
        }
        if delta.center.dist(&p) > delta.r {
            return Err(ConnectivityError::Certification(format!(
                "probe {i} at {:?} left the surface ball",
                p
            )));
        }
    }
    Ok(c)
}

/// Search for a corkscrew point of `delta` on `side`. Candidates are
/// scored directly, then the best rays from the ball center through them
/// are refined by ternary search; the winner must clear `cfg.c_min` and
/// pass certification. `clip` intersects the admissible region with the
/// interior of a host domain.
pub fn corkscrew(
    model: &BoundaryModel,
    delta: &SurfaceBall,
    side: Side,
    cands: &Candidates,
    clip: Option<&BoundaryModel>,
    cfg: &CorkscrewConfig,
) -> Result<CorkscrewResult> {
    if !(delta.r > 0.0) {
        return Err(ConnectivityError::Invalid(format!(
            "surface ball radius {} must be positive",
            delta.r
        )));
    }
    if let Some(diam) = model.diameter() {
        if delta.r >= diam {
            return Err(ConnectivityError::Invalid(format!(
                "surface ball radius {} reaches the boundary diameter {diam}",
                delta.r
            )));
        }
    }

    let base = collect_candidates(model, delta, side, cands);
    let mut scored: Vec<(f64, Point)> = base
        .iter()
        .filter_map(|p| achieved_c(model, delta, side, clip, p).map(|c| (c, p.clone())))
        .collect();
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    scored.truncate(16);

    let mut best: Option<(f64, Point)> = None;
    for (c0, p0) in &scored {
        if better(model, best.as_ref(), *c0, p0) {
            best = Some((*c0, p0.clone()));
        }
        // Refine along the ray x -> p0 by ternary search on the fraction.
        let x = &delta.center;
        let len = x.dist(p0);
        if len == 0.0 {
            continue;
        }
        let at = |t: f64| -> Point { x.lerp(p0, t * delta.r / len) };
        let score = |t: f64| -> f64 {
            achieved_c(model, delta, side, clip, &at(t)).unwrap_or(-1.0)
        };
        let mut probes: Vec<(f64, f64)> = (1..=cfg.ray_steps)
            .map(|j| {
                let t = j as f64 / (cfg.ray_steps as f64 + 1.0);
                (score(t), t)
            })
            .collect();
        probes.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let t_seed = probes[0].1;
        let (mut lo, mut hi) = (
            (t_seed - 1.0 / (cfg.ray_steps as f64 + 1.0)).max(0.0),
            (t_seed + 1.0 / (cfg.ray_steps as f64 + 1.0)).min(1.0),
        );
        for _ in 0..48 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if score(m1) < score(m2) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        let t_best = 0.5 * (lo + hi);
        let p_best = at(t_best);
        if let Some(c) = achieved_c(model, delta, side, clip, &p_best) {
            if better(model, best.as_ref(), c, &p_best) {
                best = Some((c, p_best));
            }
        }
    }

    let (c, point) = best.ok_or(ConnectivityError::NoCorkscrew {
        best: 0.0,
        c_min: cfg.c_min,
    })?;
    if c < cfg.c_min {
        return Err(ConnectivityError::NoCorkscrew {
            best: c,
            c_min: cfg.c_min,
        });
    }
    let c = certify_corkscrew(model, delta, side, clip, &point, cfg.samples, cfg.seed)?;
    Ok(CorkscrewResult {
        delta: delta.clone(),
        point,
        c,
        side,
        certified_samples: cfg.samples,
    })
}

/// Corkscrew point relative to a boundary cube, snapped to the center of
/// a Whitney cube so later constructions can reuse the cube's clearance.
#[derive(Clone, Debug, Serialize)]
pub struct CubeCorkscrew {
    pub q: CubeId,
    pub point: Point,
    pub whitney: whitney::WhitneyId,
    pub c: f64,
    /// Clearance over the cube scale: delta(X_Q) / side(Q).
    pub delta_ratio: f64,
    /// Distance to the cube over its scale: dist(X_Q, Q) / side(Q).
    pub dist_ratio: f64,
}

/// Find the corkscrew point of the surface ball spanned by a boundary
/// cube, then snap it to the nearest Whitney cube center.
pub fn cube_corkscrew(
    model: &BoundaryModel,
    grid: &DyadicGrid,
    decomp: &WhitneyDecomposition,
    q: CubeId,
    cfg: &CorkscrewConfig,
) -> Result<CubeCorkscrew> {
    let cube = grid.cube(q);
    let s = cube.side();
    let delta = model.surface_ball(cube.center.clone(), s)?;
    let raw = corkscrew(
        model,
        &delta,
        Side::Interior,
        &Candidates::Whitney(decomp),
        None,
        cfg,
    )?;
    let wid = decomp.locate(&raw.point).ok_or_else(|| {
        ConnectivityError::Uncovered(format!("corkscrew point {:?}", raw.point))
    })?;
    let point = decomp.get(wid).cube.center();
    let c = certify_corkscrew(
        model,
        &delta,
        Side::Interior,
        None,
        &point,
        cfg.samples,
        cfg.seed,
    )?;
    let probe = AxisBox::from_center_half(&point, 0.0);
    let dist = grid
        .dist_box_to_cube_within(&probe, q, f64::INFINITY)
        .unwrap_or(f64::INFINITY);
    Ok(CubeCorkscrew {
        q,
        point: point.clone(),
        whitney: wid,
        c,
        delta_ratio: model.distance(&point) / s,
        dist_ratio: dist / s,
    })
}

/// The ball a corkscrew result certifies.
pub fn corkscrew_ball(res: &CorkscrewResult) -> Ball {
    Ball::new(res.point.clone(), res.c * res.delta.r)
}
