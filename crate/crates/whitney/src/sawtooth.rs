//! Carleson boxes and sawtooth domains realized as unions of fattened
//! Whitney cubes, with membership oracles and polyhedral boundary export.

use crate::decompose::WhitneyDecomposition;
use crate::error::WhitneyError;
use crate::faces::extract_faces;
use crate::region::RegionSet;
use crate::Result;
use geom::{AxisBox, BoundaryModel, CubeUnion, Point, SurfaceBall};
use grid::{CubeFamily, CubeId, DyadicGrid};

#[derive(Clone, Debug, PartialEq)]
pub enum SawtoothKind {
    /// T_Q over one generating cube.
    CarlesonBox(CubeId),
    /// T for a surface ball, collected from the matching generation.
    BallBox { center: Point, r: f64 },
    /// Global sawtooth for a removed family.
    Global,
    /// Sawtooth under a root cube.
    Local(CubeId),
    /// Approximating domain at generation N.
    Approx(i32),
}

pub struct SawtoothDomain {
    pub kind: SawtoothKind,
    /// Fattened Whitney boxes whose union closure realizes the domain.
    pub boxes: Vec<AxisBox>,
    union: CubeUnion,
    /// Generating grid cubes that contributed their regions.
    pub cube_ids: Vec<CubeId>,
    /// Smallest participating box side: the resolution collar of the realization.
    pub min_box_side: f64,
    pub lambda: f64,
}

impl SawtoothDomain {
    fn from_boxes(
        kind: SawtoothKind,
        boxes: Vec<AxisBox>,
        cube_ids: Vec<CubeId>,
        lambda: f64,
    ) -> Result<Self> {
        if boxes.is_empty() {
            return Err(WhitneyError::OutOfRange(
                "sawtooth realization has no member boxes".into(),
            ));
        }
        let min_box_side = boxes
            .iter()
            .map(|b| b.min_side())
            .fold(f64::INFINITY, f64::min);
        let union = CubeUnion::new(boxes.clone());
        Ok(SawtoothDomain {
            kind,
            boxes,
            union,
            cube_ids,
            min_box_side,
            lambda,
        })
    }

    /// Interior membership under the sampled-ball rule.
    pub fn contains(&self, x: &Point) -> bool {
        self.union.interior_contains(x)
    }

    /// Membership in the closed union.
    pub fn closure_contains(&self, x: &Point) -> bool {
        self.union.contains(x)
    }

    pub fn union(&self) -> &CubeUnion {
        &self.union
    }

    pub fn bounds(&self) -> &AxisBox {
        self.union.bounds().expect("nonempty union has bounds")
    }

    /// Exact distance to the union boundary realized through the face list.
    pub fn boundary_model(&self) -> Result<BoundaryModel> {
        let faces = extract_faces(&self.boxes);
        Ok(BoundaryModel::polyhedral(
            faces,
            CubeUnion::new(self.boxes.clone()),
        )?)
    }

    /// Smallest enclosing-ball multiplier against a center and scale,
    /// measured over box corners.
    pub fn enclosing_multiplier(&self, center: &Point, scale: f64) -> f64 {
        let mut worst = 0.0f64;
        for b in &self.boxes {
            worst = worst.max(b.farthest_dist_to_point(center));
        }
        worst / scale
    }

    /// Height of the unresolved strip above the generating set: points closer
    /// to the boundary than this may fall between the realized boxes even
    /// when the ideal domain holds them.
    pub fn collar_height(&self, decomp: &WhitneyDecomposition) -> f64 {
        decomp.collar()
    }
}

/// T_Q: the interior of the union of regions over the subtree of Q.
pub fn carleson_box(
    grid: &DyadicGrid,
    decomp: &WhitneyDecomposition,
    regions: &RegionSet,
    q: CubeId,
) -> Result<SawtoothDomain> {
    let ids = grid.discretized_carleson(q)?;
    build_from_cubes(SawtoothKind::CarlesonBox(q), grid, decomp, regions, &ids)
}

/// T for a surface ball: unions the Carleson boxes of the generation matched
/// to the ball radius that meet the doubled ball.
pub fn carleson_box_ball(
    grid: &DyadicGrid,
    decomp: &WhitneyDecomposition,
    regions: &RegionSet,
    delta: &SurfaceBall,
) -> Result<SawtoothDomain> {
    let r = delta.r;
    let k = (-(200.0 * r).log2()).floor() as i32;
    if k < grid.k_min() || k > grid.k_max() {
        return Err(WhitneyError::OutOfRange(format!(
            "ball radius {r} needs generation {k}, grid holds [{}, {}]",
            grid.k_min(),
            grid.k_max()
        )));
    }
    let probe = AxisBox::new(delta.center.clone(), delta.center.clone());
    let mut roots = Vec::new();
    for &id in grid.level(k) {
        if grid.cube(id).rim {
            continue;
        }
        if let Some(dist) = grid.dist_box_to_cube_within(&probe, id, 2.0 * r) {
            if dist <= 2.0 * r {
                roots.push(id);
            }
        }
    }
    if roots.is_empty() {
        return Err(WhitneyError::OutOfRange(format!(
            "no generation-{k} cubes meet the doubled ball at {:?}",
            delta.center
        )));
    }
    let mut ids = Vec::new();
    for root in roots {
        ids.extend(grid.discretized_carleson(root)?);
    }
    ids.sort_unstable_by_key(|id| id.0);
    ids.dedup();
    build_from_cubes(
        SawtoothKind::BallBox {
            center: delta.center.clone(),
            r,
        },
        grid,
        decomp,
        regions,
        &ids,
    )
}

/// Sawtooth domain for a removed family, global or under a root.
pub fn sawtooth(
    grid: &DyadicGrid,
    decomp: &WhitneyDecomposition,
    regions: &RegionSet,
    family: &CubeFamily,
    root: Option<CubeId>,
) -> Result<SawtoothDomain> {
    let ids = grid.discretized_sawtooth(family, root)?;
    let kind = match root {
        Some(q) => SawtoothKind::Local(q),
        None => SawtoothKind::Global,
    };
    build_from_cubes(kind, grid, decomp, regions, &ids)
}

/// Approximating domain at generation N: the global sawtooth that removes
/// everything at and below scale 2^{-N}, exported with its polyhedral
/// boundary.
pub fn approx_domain(
    grid: &DyadicGrid,
    decomp: &WhitneyDecomposition,
    regions: &RegionSet,
    n: i32,
) -> Result<(SawtoothDomain, BoundaryModel)> {
    let family = grid.generation_family(n)?;
    let domain = {
        let ids = grid.discretized_sawtooth(&family, None)?;
        build_from_cubes(SawtoothKind::Approx(n), grid, decomp, regions, &ids)?
    };
    let model = domain.boundary_model()?;
    Ok((domain, model))
}

fn build_from_cubes(
    kind: SawtoothKind,
    grid: &DyadicGrid,
    decomp: &WhitneyDecomposition,
    regions: &RegionSet,
    ids: &[CubeId],
) -> Result<SawtoothDomain> {
    let mut boxes = Vec::new();
    let mut used = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for &id in ids {
        if grid.cube(id).rim {
            continue;
        }
        let region = regions.get(id).ok_or_else(|| {
            WhitneyError::OutOfRange(format!("no region was built for cube {}", id.0))
        })?;
        used.push(id);
        for &w in &region.members {
            if seen.insert(w) {
                boxes.push(decomp.get(w).cube.dilate(1.0 + regions.lambda));
            }
        }
    }
    SawtoothDomain::from_boxes(kind, boxes, used, regions.lambda)
}
