//! Query layer over a built grid: subtree extraction, sawtooth families,
//! containment balls, and thin-boundary mass estimates.

use crate::build::GridSpec;
use crate::cube::{CubeFamily, CubeId, DyadicCube};
use crate::error::GridError;
use crate::Result;
use geom::{AxisBox, Ball, BoundaryModel, Point, SpatialIndex, SurfaceBall};
use serde::Serialize;
use std::collections::HashSet;

pub struct DyadicGrid {
    model: BoundaryModel,
    spec: GridSpec,
    cubes: Vec<DyadicCube>,
    k_min: i32,
    levels: Vec<Vec<CubeId>>,
    samples: Vec<Point>,
    weights: Vec<f64>,
    sample_index: SpatialIndex,
    a0: f64,
    c1: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CubeBallReport {
    pub ball: Ball,
    pub delta: SurfaceBall,
    pub sigma_delta: f64,
    pub sigma_cube: f64,
    /// Smallest radius about the center that covers every member sample.
    pub containment_radius: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelStats {
    pub k: i32,
    pub cubes: usize,
    pub rim_cubes: usize,
    pub sigma_total: f64,
    pub sigma_interior: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThinFit {
    pub eta: f64,
    pub coefficient: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GridStats {
    pub k_min: i32,
    pub k_max: i32,
    pub cube_count: usize,
    pub sample_count: usize,
    pub levels: Vec<LevelStats>,
    pub inner_radius_ratio: f64,
    pub diameter_ratio: f64,
    pub thin_fit: Option<ThinFit>,
}

#[derive(Serialize)]
struct CubeJson<'a> {
    id: u32,
    k: i32,
    parent: Option<u32>,
    center: &'a [f64],
    r: f64,
    sigma: f64,
}

impl DyadicGrid {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        model: BoundaryModel,
        spec: GridSpec,
        cubes: Vec<DyadicCube>,
        k_min: i32,
        levels: Vec<Vec<CubeId>>,
        samples: Vec<Point>,
        weights: Vec<f64>,
        sample_index: SpatialIndex,
    ) -> Self {
        DyadicGrid {
            model,
            spec,
            cubes,
            k_min,
            levels,
            samples,
            weights,
            sample_index,
            a0: 0.0,
            c1: 0.0,
        }
    }

    pub(crate) fn compute_achieved_constants(&mut self) {
        let interior: Vec<&DyadicCube> = self.cubes.iter().filter(|c| !c.rim).collect();
        let pool: Vec<&DyadicCube> = if interior.is_empty() {
            self.cubes.iter().collect()
        } else {
            interior
        };
        let mut a0 = f64::INFINITY;
        let mut c1 = 0.0f64;
        for cube in pool {
            let ell = cube.side();
            a0 = a0.min(cube.r / ell);
            let diam = match &cube.bbox {
                Some(b) => b.diam(),
                None => 2.0 * cube.outer,
            };
            c1 = c1.max(diam / ell);
        }
        self.a0 = if a0.is_finite() { a0 } else { 0.0 };
        self.c1 = c1;
    }

    pub fn model(&self) -> &BoundaryModel {
        &self.model
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn k_min(&self) -> i32 {
        self.spec.k_min
    }

    pub fn k_max(&self) -> i32 {
        self.spec.k_max
    }

    pub fn cube_count(&self) -> usize {
        self.cubes.len()
    }

    pub fn cubes(&self) -> &[DyadicCube] {
        &self.cubes
    }

    pub fn get(&self, id: CubeId) -> Result<&DyadicCube> {
        self.cubes
            .get(id.index())
            .ok_or(GridError::UnknownCube(id.0))
    }

    /// Panicking accessor for ids known to come from this grid.
    pub fn cube(&self, id: CubeId) -> &DyadicCube {
        &self.cubes[id.index()]
    }

    pub fn level(&self, k: i32) -> &[CubeId] {
        if k < self.k_min {
            return &[];
        }
        match self.levels.get((k - self.k_min) as usize) {
            Some(ids) => ids,
            None => &[],
        }
    }

    pub fn samples(&self) -> &[Point] {
        &self.samples
    }

    pub fn sample_weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn sample_index(&self) -> &SpatialIndex {
        &self.sample_index
    }

    /// Achieved lower bound on r_Q / 2^{-k} over interior cubes.
    pub fn inner_radius_ratio(&self) -> f64 {
        self.a0
    }

    /// Achieved upper bound on diam(Q) / 2^{-k} over interior cubes.
    pub fn diameter_ratio(&self) -> f64 {
        self.c1
    }

    /// All cubes of the subtree rooted at `root`, root first, id order after.
    pub fn discretized_carleson(&self, root: CubeId) -> Result<Vec<CubeId>> {
        self.get(root)?;
        let mut out = Vec::new();
        let mut stack = vec![root];
        while let Some(id) = stack.pop() {
            out.push(id);
            stack.extend(self.cube(id).children.iter().rev().copied());
        }
        let (first, rest) = out.split_at_mut(1);
        let _ = first;
        rest.sort_unstable_by_key(|id| id.0);
        Ok(out)
    }

    /// Every cube at generation `k` as a disjoint family.
    pub fn generation_family(&self, k: i32) -> Result<CubeFamily> {
        if k < self.k_min() || k > self.k_max() {
            return Err(GridError::OutOfRange(format!(
                "generation {k} outside [{}, {}]",
                self.k_min(),
                self.k_max()
            )));
        }
        CubeFamily::new(self.level(k).to_vec(), &self.cubes)
    }

    /// Cubes not contained in any family member, optionally restricted to the
    /// subtree under `root`. Result is in id order.
    pub fn discretized_sawtooth(
        &self,
        family: &CubeFamily,
        root: Option<CubeId>,
    ) -> Result<Vec<CubeId>> {
        for &id in family.ids() {
            self.get(id)?;
        }
        let mut removed: HashSet<u32> = HashSet::new();
        for &id in family.ids() {
            let mut stack = vec![id];
            while let Some(q) = stack.pop() {
                if removed.insert(q.0) {
                    stack.extend(self.cube(q).children.iter().copied());
                }
            }
        }
        let base: Vec<CubeId> = match root {
            Some(q0) => {
                let mut sub = self.discretized_carleson(q0)?;
                sub.sort_unstable_by_key(|id| id.0);
                sub
            }
            None => self.cubes.iter().map(|c| c.id).collect(),
        };
        Ok(base
            .into_iter()
            .filter(|id| !removed.contains(&id.0))
            .collect())
    }

    /// The containment ball pair for a cube: B_Q about the center with the
    /// inner radius, and the matching surface ball.
    pub fn cube_ball(&self, id: CubeId) -> Result<CubeBallReport> {
        let cube = self.get(id)?;
        let ball = Ball::new(cube.center.clone(), cube.r);
        let mut sr = cube.r;
        if let Some(diam) = self.model.diameter() {
            sr = sr.min(diam);
        }
        let delta = self.model.surface_ball(cube.center.clone(), sr)?;
        let sigma_delta = self.model.sigma_ball(&delta)?;
        Ok(CubeBallReport {
            ball,
            delta,
            sigma_delta,
            sigma_cube: cube.sigma,
            containment_radius: cube.outer,
        })
    }

    /// Fraction of a cube's mass within tau * 2^{-k} of the rest of the set.
    pub fn thin_boundary_check(&self, id: CubeId, tau: f64) -> Result<f64> {
        let cube = self.get(id)?;
        if !(tau > 0.0 && tau < self.a0) {
            return Err(GridError::OutOfRange(format!(
                "tau {tau} outside (0, {})",
                self.a0
            )));
        }
        if cube.sigma == 0.0 {
            return Ok(0.0);
        }
        let cutoff = tau * cube.side();
        let mut band = 0.0;
        for &m in &cube.members {
            let p = &self.samples[m as usize];
            let hit = self
                .sample_index
                .nearest_filtered(p, |i| !cube.is_member(i as u32));
            if let Some((_, dist)) = hit {
                if dist <= cutoff {
                    band += self.weights[m as usize];
                }
            }
        }
        Ok(band / cube.sigma)
    }

    /// Exact distance from a box to a cube's member samples, or None when the
    /// bounding-box lower bound already exceeds `cutoff`.
    pub fn dist_box_to_cube_within(
        &self,
        b: &AxisBox,
        id: CubeId,
        cutoff: f64,
    ) -> Option<f64> {
        let cube = &self.cubes[id.index()];
        let bbox = cube.bbox.as_ref()?;
        if b.dist_to_box(bbox) > cutoff {
            return None;
        }
        let d = cube
            .members
            .iter()
            .map(|&m| b.dist_to_point(&self.samples[m as usize]))
            .fold(f64::INFINITY, f64::min);
        Some(d)
    }

    pub fn stats(&self) -> GridStats {
        let levels: Vec<LevelStats> = (self.k_min()..=self.k_max())
            .map(|k| {
                let ids = self.level(k);
                let rim = ids.iter().filter(|&&id| self.cube(id).rim).count();
                let sigma_total: f64 = ids.iter().map(|&id| self.cube(id).sigma).sum();
                let sigma_interior: f64 = ids
                    .iter()
                    .filter(|&&id| !self.cube(id).rim)
                    .map(|&id| self.cube(id).sigma)
                    .sum();
                LevelStats {
                    k,
                    cubes: ids.len(),
                    rim_cubes: rim,
                    sigma_total,
                    sigma_interior,
                }
            })
            .collect();
        GridStats {
            k_min: self.k_min(),
            k_max: self.k_max(),
            cube_count: self.cubes.len(),
            sample_count: self.samples.len(),
            levels,
            inner_radius_ratio: self.a0,
            diameter_ratio: self.c1,
            thin_fit: self.fit_thin_exponent(),
        }
    }

    /// Least-squares fit of ln(band ratio) against ln(tau) on mid-level cubes.
    fn fit_thin_exponent(&self) -> Option<ThinFit> {
        if self.a0 <= 0.0 {
            return None;
        }
        let mid = (self.k_min() + self.k_max()) / 2;
        let cubes: Vec<CubeId> = self
            .level(mid)
            .iter()
            .filter(|&&id| !self.cube(id).rim && self.cube(id).sigma > 0.0)
            .take(16)
            .copied()
            .collect();
        if cubes.is_empty() {
            return None;
        }
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for f in [0.8, 0.4, 0.2, 0.1] {
            let tau = f * self.a0;
            let mut sum = 0.0;
            for &id in &cubes {
                sum += self.thin_boundary_check(id, tau).ok()?;
            }
            let mean = sum / cubes.len() as f64;
            if mean > 0.0 {
                xs.push(tau.ln());
                ys.push(mean.ln());
            }
        }
        if xs.len() < 2 {
            return None;
        }
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        if sxx == 0.0 {
            return None;
        }
        let eta = sxy / sxx;
        let coefficient = (my - eta * mx).exp();
        Some(ThinFit { eta, coefficient })
    }

    pub fn export_json(&self) -> String {
        let rows: Vec<CubeJson> = self
            .cubes
            .iter()
            .map(|c| CubeJson {
                id: c.id.0,
                k: c.k,
                parent: c.parent.map(|p| p.0),
                center: c.center.as_slice(),
                r: c.r,
                sigma: c.sigma,
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("cube rows serialize")
    }
}
