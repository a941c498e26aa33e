//! Boundary-set models: an n-dimensional set E in ambient dimension d = n+1,
//! each answering surface measure of balls, nearest point and distance,
//! interior membership, and certified distance to axis boxes.

use crate::ball::SurfaceBall;
use crate::boxes::{AxisBox, CubeUnion};
use crate::error::GeomError;
use crate::index::SpatialIndex;
use crate::point::Point;
use crate::Result;
use serde::{Deserialize, Serialize};

/// Chart window on a flat model (hyperplane or graph): an axis cube of chart
/// coordinates centered at `chart_center` with half side `half_extent`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub chart_center: Vec<f64>,
    pub half_extent: f64,
}

impl Frame {
    pub fn new(chart_center: Vec<f64>, half_extent: f64) -> Self {
        assert!(half_extent > 0.0);
        Frame {
            chart_center,
            half_extent,
        }
    }

    pub fn chart_box(&self) -> AxisBox {
        AxisBox::from_center_half(&Point::new(&self.chart_center), self.half_extent)
    }
}

/// Graph functions φ with an explicit Lipschitz constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum GraphShape {
    /// φ(x) = slope * |x_0| (ridge along the first chart axis).
    AbsSlope { slope: f64 },
}

impl GraphShape {
    pub fn lipschitz(&self) -> f64 {
        match self {
            GraphShape::AbsSlope { slope } => *slope,
        }
    }

    pub fn eval(&self, chart: &[f64]) -> f64 {
        match self {
            GraphShape::AbsSlope { slope } => slope * chart[0].abs(),
        }
    }

    /// |∇φ| where defined; constant a.e. for the kink graph.
    pub fn gradient_norm(&self) -> f64 {
        self.lipschitz()
    }
}

/// Axis-aligned polyhedral face: a degenerate box (zero extent on `axis`)
/// with outward normal sign along that axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Face {
    pub axis: usize,
    pub rect: AxisBox,
    pub outward: f64,
}

impl Face {
    pub fn new(axis: usize, rect: AxisBox, outward: f64) -> Self {
        assert!(rect.side(axis).abs() < 1e-12 * rect.max_side().max(1.0));
        assert!(outward == 1.0 || outward == -1.0);
        Face {
            axis,
            rect,
            outward,
        }
    }

    pub fn offset(&self) -> f64 {
        self.rect.lo().coord(self.axis)
    }

    pub fn area(&self) -> f64 {
        (0..self.rect.dim())
            .filter(|&i| i != self.axis)
            .map(|i| self.rect.side(i))
            .product()
    }
}

#[derive(Clone, Debug)]
pub struct PolyhedralBoundary {
    faces: Vec<Face>,
    /// Interior cells of the domain as a cube union; empty for pure sets
    /// (e.g. a slit) whose domain is the full complement.
    cells: CubeUnion,
    face_index: SpatialIndex,
    max_face_half_diam: f64,
    bounds: AxisBox,
    tag: u64,
}

#[derive(Clone, Debug)]
pub struct CloudBoundary {
    points: Vec<Point>,
    weights: Vec<f64>,
    spacing: f64,
    index: SpatialIndex,
    diam_upper: f64,
    tag: u64,
}

#[derive(Clone, Debug)]
pub struct CantorBoundary {
    depth: u32,
    squares: Vec<AxisBox>,
    center_index: SpatialIndex,
    tag: u64,
}

/// Variant discriminant for reporting and dispatch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryKind {
    Hyperplane,
    Sphere,
    LipschitzGraph,
    Polyhedral,
    FourCornerCantor,
    PointCloud,
}

#[derive(Clone, Debug)]
pub enum BoundaryModel {
    /// E = {x_d = 0}; the domain is the upper half-space. `extent` (a chart
    /// box) windows measure and sampling only; metric queries see the full
    /// plane.
    Hyperplane { d: usize, extent: Option<AxisBox> },
    /// E = sphere of radius `radius` about the origin; the domain is the ball.
    Sphere { d: usize, radius: f64 },
    /// E = graph of φ; the domain is the region above the graph. `extent`
    /// windows measure and sampling only.
    LipschitzGraph {
        d: usize,
        shape: GraphShape,
        extent: Option<AxisBox>,
    },
    Polyhedral(PolyhedralBoundary),
    FourCornerCantor(CantorBoundary),
    PointCloud(CloudBoundary),
}

fn fnv1a(bytes: impl IntoIterator<Item = u8>) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn hash_floats(seed: u64, xs: impl IntoIterator<Item = f64>) -> u64 {
    let mut h = seed;
    for x in xs {
        for b in x.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

impl BoundaryModel {
    pub fn hyperplane(d: usize) -> Self {
        assert!(d >= 2);
        BoundaryModel::Hyperplane { d, extent: None }
    }

    pub fn hyperplane_patch(d: usize, extent: AxisBox) -> Self {
        assert!(d >= 2);
        assert_eq!(extent.dim(), d - 1, "extent lives in chart coordinates");
        BoundaryModel::Hyperplane {
            d,
            extent: Some(extent),
        }
    }

    pub fn sphere(d: usize, radius: f64) -> Self {
        assert!(d == 2 || d == 3, "sphere model supports d in {{2,3}}");
        assert!(radius > 0.0);
        BoundaryModel::Sphere { d, radius }
    }

    pub fn lipschitz_graph(d: usize, shape: GraphShape, extent: Option<AxisBox>) -> Self {
        assert!(d >= 2);
        if let Some(b) = &extent {
            assert_eq!(b.dim(), d - 1);
        }
        assert!(shape.lipschitz() > 0.0);
        BoundaryModel::LipschitzGraph { d, shape, extent }
    }

    pub fn polyhedral(faces: Vec<Face>, cells: CubeUnion) -> Result<Self> {
        if faces.is_empty() {
            return Err(GeomError::EmptyInput("polyhedral boundary needs faces"));
        }
        let d = faces[0].rect.dim();
        if faces.iter().any(|f| f.rect.dim() != d || f.axis >= d) {
            return Err(GeomError::InvalidArgument(
                "faces must share ambient dimension".into(),
            ));
        }
        let centers: Vec<Point> = faces.iter().map(|f| f.rect.center()).collect();
        let max_face_half_diam = faces
            .iter()
            .map(|f| 0.5 * f.rect.diam())
            .fold(0.0, f64::max);
        let bounds = faces
            .iter()
            .skip(1)
            .fold(faces[0].rect.clone(), |acc, f| acc.union_bounds(&f.rect));
        let tag = hash_floats(
            fnv1a(*b"polyhedral"),
            faces
                .iter()
                .flat_map(|f| {
                    let mut v = vec![f.axis as f64, f.outward];
                    v.extend(f.rect.lo().as_slice().iter().copied());
                    v.extend(f.rect.hi().as_slice().iter().copied());
                    v
                })
                .collect::<Vec<_>>(),
        );
        Ok(BoundaryModel::Polyhedral(PolyhedralBoundary {
            faces,
            cells,
            face_index: SpatialIndex::build(centers),
            max_face_half_diam,
            bounds,
            tag,
        }))
    }

    /// Four-corner set in the plane: generation m keeps the 4 corner squares
    /// of side 1/4 of each generation m-1 square, starting from [0,1]^2.
    pub fn four_corner_cantor(depth: u32) -> Self {
        assert!(depth <= 8, "depth capped to keep 4^m square count sane");
        let mut squares = vec![AxisBox::new(Point::zeros(2), Point::new(&[1.0, 1.0]))];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(squares.len() * 4);
            for s in &squares {
                let side = s.side(0) / 4.0;
                for (cx, cy) in [(0.0, 0.0), (3.0, 0.0), (0.0, 3.0), (3.0, 3.0)] {
                    let lo = Point::new(&[s.lo().coord(0) + cx * side, s.lo().coord(1) + cy * side]);
                    let hi = Point::new(&[lo.coord(0) + side, lo.coord(1) + side]);
                    next.push(AxisBox::new(lo, hi));
                }
            }
            squares = next;
        }
        let centers: Vec<Point> = squares.iter().map(|s| s.center()).collect();
        let tag = fnv1a(
            b"cantor"
                .iter()
                .copied()
                .chain(depth.to_le_bytes()),
        );
        BoundaryModel::FourCornerCantor(CantorBoundary {
            depth,
            squares,
            center_index: SpatialIndex::build(centers),
            tag,
        })
    }

    pub fn point_cloud(points: Vec<Point>, weights: Vec<f64>, spacing: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(GeomError::EmptyInput("point cloud needs samples"));
        }
        if points.len() != weights.len() {
            return Err(GeomError::InvalidArgument(
                "weights must match points".into(),
            ));
        }
        if spacing <= 0.0 || weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(GeomError::InvalidArgument(
                "spacing must be positive, weights nonnegative".into(),
            ));
        }
        let bounds = points.iter().skip(1).fold(
            AxisBox::new(points[0].clone(), points[0].clone()),
            |acc, p| acc.union_bounds(&AxisBox::new(p.clone(), p.clone())),
        );
        let tag = hash_floats(
            fnv1a(*b"cloud"),
            points
                .iter()
                .flat_map(|p| p.as_slice().iter().copied())
                .chain(weights.iter().copied()),
        );
        Ok(BoundaryModel::PointCloud(CloudBoundary {
            index: SpatialIndex::build(points.clone()),
            points,
            weights,
            spacing,
            diam_upper: bounds.diam(),
            tag,
        }))
    }

    pub fn kind(&self) -> BoundaryKind {
        match self {
            BoundaryModel::Hyperplane { .. } => BoundaryKind::Hyperplane,
            BoundaryModel::Sphere { .. } => BoundaryKind::Sphere,
            BoundaryModel::LipschitzGraph { .. } => BoundaryKind::LipschitzGraph,
            BoundaryModel::Polyhedral(_) => BoundaryKind::Polyhedral,
            BoundaryModel::FourCornerCantor(_) => BoundaryKind::FourCornerCantor,
            BoundaryModel::PointCloud(_) => BoundaryKind::PointCloud,
        }
    }

    /// Ambient dimension d.
    pub fn dim(&self) -> usize {
        match self {
            BoundaryModel::Hyperplane { d, .. } => *d,
            BoundaryModel::Sphere { d, .. } => *d,
            BoundaryModel::LipschitzGraph { d, .. } => *d,
            BoundaryModel::Polyhedral(p) => p.bounds.dim(),
            BoundaryModel::FourCornerCantor(_) => 2,
            BoundaryModel::PointCloud(c) => c.points[0].dim(),
        }
    }

    /// Measure dimension n; d = n + 1 for every model here.
    pub fn n(&self) -> usize {
        self.dim() - 1
    }

    /// None encodes an unbounded set.
    pub fn diameter(&self) -> Option<f64> {
        match self {
            BoundaryModel::Hyperplane { .. } | BoundaryModel::LipschitzGraph { .. } => None,
            BoundaryModel::Sphere { radius, .. } => Some(2.0 * radius),
            BoundaryModel::Polyhedral(p) => Some(p.bounds.diam()),
            BoundaryModel::FourCornerCantor(_) => Some(std::f64::consts::SQRT_2),
            BoundaryModel::PointCloud(c) => Some(c.diam_upper),
        }
    }

    pub fn tag(&self) -> u64 {
        match self {
            BoundaryModel::Hyperplane { d, extent } => hash_floats(
                fnv1a(*b"hyperplane").wrapping_add(*d as u64),
                extent
                    .iter()
                    .flat_map(|b| {
                        b.lo()
                            .as_slice()
                            .iter()
                            .chain(b.hi().as_slice())
                            .copied()
                            .collect::<Vec<_>>()
                    })
                    .collect::<Vec<_>>(),
            ),
            BoundaryModel::Sphere { d, radius } => {
                hash_floats(fnv1a(*b"sphere").wrapping_add(*d as u64), [*radius])
            }
            BoundaryModel::LipschitzGraph { d, shape, .. } => hash_floats(
                fnv1a(*b"graph").wrapping_add(*d as u64),
                [shape.lipschitz()],
            ),
            BoundaryModel::Polyhedral(p) => p.tag,
            BoundaryModel::FourCornerCantor(c) => c.tag,
            BoundaryModel::PointCloud(c) => c.tag,
        }
    }

    /// Tolerance for "lies on the boundary" checks near `x`.
    pub fn on_boundary_tolerance(&self, x: &Point) -> f64 {
        match self {
            BoundaryModel::PointCloud(c) => 0.5 * c.spacing,
            _ => 1e-9 * x.norm().max(1.0),
        }
    }

    /// Distance to E and a nearest boundary point (lexicographic minimum on
    /// exact ties where cheaply detectable).
    pub fn nearest(&self, x: &Point) -> (f64, Point) {
        match self {
            BoundaryModel::Hyperplane { d, .. } => {
                let t = x.coord(d - 1);
                (t.abs(), x.with_coord(d - 1, 0.0))
            }
            BoundaryModel::Sphere { d, radius } => {
                let rho = x.norm();
                if rho == 0.0 {
                    let mut foot = Point::zeros(*d);
                    foot.set_coord(0, -radius);
                    return (*radius, foot);
                }
                ((rho - radius).abs(), x.scale(radius / rho))
            }
            BoundaryModel::LipschitzGraph { d, shape, .. } => {
                let GraphShape::AbsSlope { slope } = shape;
                let a = x.coord(0);
                let b = x.coord(d - 1);
                let (f1, f2) = wedge_nearest_2d(a, b, *slope);
                let mut foot = x.clone();
                foot.set_coord(0, f1);
                foot.set_coord(d - 1, f2);
                let dd = ((a - f1).powi(2) + (b - f2).powi(2)).sqrt();
                (dd, foot)
            }
            BoundaryModel::Polyhedral(p) => {
                let (fi0, _) = p.face_index.nearest(x);
                let ub = p.faces[fi0].rect.dist_to_point(x);
                let cands = p
                    .face_index
                    .in_ball(x, ub + p.max_face_half_diam + 1e-12 * ub.max(1.0));
                let mut best = (ub, p.faces[fi0].rect.clamp_point(x));
                for fi in cands {
                    let d = p.faces[fi].rect.dist_to_point(x);
                    if d < best.0 {
                        best = (d, p.faces[fi].rect.clamp_point(x));
                    } else if d == best.0 {
                        let foot = p.faces[fi].rect.clamp_point(x);
                        if foot.lex_cmp(&best.1).is_lt() {
                            best.1 = foot;
                        }
                    }
                }
                best
            }
            BoundaryModel::FourCornerCantor(c) => {
                let (si0, _) = c.center_index.nearest(x);
                let half_diag = 0.5 * c.squares[0].diam();
                let ub = c.squares[si0].dist_to_point(x);
                let cands = c
                    .center_index
                    .in_ball(x, ub + half_diag + 1e-12 * ub.max(1.0));
                let mut best = (ub, c.squares[si0].clamp_point(x));
                for si in cands {
                    let d = c.squares[si].dist_to_point(x);
                    if d < best.0 {
                        best = (d, c.squares[si].clamp_point(x));
                    } else if d == best.0 {
                        let foot = c.squares[si].clamp_point(x);
                        if foot.lex_cmp(&best.1).is_lt() {
                            best.1 = foot;
                        }
                    }
                }
                best
            }
            BoundaryModel::PointCloud(c) => {
                let (i, d) = c.index.nearest(x);
                (d, c.points[i].clone())
            }
        }
    }

    pub fn distance(&self, x: &Point) -> f64 {
        self.nearest(x).0
    }

    /// Membership in the open domain Ω attached to the model.
    pub fn is_interior(&self, x: &Point) -> bool {
        match self {
            BoundaryModel::Hyperplane { d, .. } => x.coord(d - 1) > 0.0,
            BoundaryModel::Sphere { radius, .. } => x.norm() < *radius,
            BoundaryModel::LipschitzGraph { d, shape, .. } => {
                let chart: Vec<f64> = x.as_slice()[..d - 1].to_vec();
                x.coord(d - 1) > shape.eval(&chart)
            }
            BoundaryModel::Polyhedral(p) => {
                if p.cells.is_empty() {
                    self.distance(x) > 0.0
                } else {
                    p.cells.interior_contains(x)
                }
            }
            BoundaryModel::FourCornerCantor(_) | BoundaryModel::PointCloud(_) => {
                self.distance(x) > 0.0
            }
        }
    }

    /// Certified interval [lo, hi] containing dist(E, box). Exact (lo == hi)
    /// for every current variant; the interval form is the contract.
    pub fn dist_to_box(&self, b: &AxisBox) -> (f64, f64) {
        match self {
            BoundaryModel::Hyperplane { d, .. } => {
                let t_lo = b.lo().coord(d - 1);
                let t_hi = b.hi().coord(d - 1);
                let dist = t_lo.max(-t_hi).max(0.0);
                (dist, dist)
            }
            BoundaryModel::Sphere { radius, .. } => {
                let origin = Point::zeros(b.dim());
                let rho_min = b.dist_to_point(&origin);
                let rho_max = b.farthest_dist_to_point(&origin);
                let dist = if rho_min <= *radius && *radius <= rho_max {
                    0.0
                } else if rho_min > *radius {
                    rho_min - radius
                } else {
                    radius - rho_max
                };
                (dist, dist)
            }
            BoundaryModel::LipschitzGraph { d, shape, .. } => {
                let GraphShape::AbsSlope { slope } = shape;
                let rect = [
                    b.lo().coord(0),
                    b.hi().coord(0),
                    b.lo().coord(d - 1),
                    b.hi().coord(d - 1),
                ];
                let dist = wedge_rect_dist_2d(&rect, *slope);
                (dist, dist)
            }
            BoundaryModel::Polyhedral(p) => {
                let c = b.center();
                let (fi0, _) = p.face_index.nearest(&c);
                let ub = b.dist_to_box(&p.faces[fi0].rect);
                let reach = ub + 0.5 * b.diam() + p.max_face_half_diam;
                let mut best = ub;
                for fi in p.face_index.in_ball(&c, reach + 1e-12 * reach.max(1.0)) {
                    best = best.min(b.dist_to_box(&p.faces[fi].rect));
                }
                (best, best)
            }
            BoundaryModel::FourCornerCantor(cb) => {
                let c = b.center();
                let (si0, _) = cb.center_index.nearest(&c);
                let ub = b.dist_to_box(&cb.squares[si0]);
                let reach = ub + 0.5 * b.diam() + 0.5 * cb.squares[0].diam();
                let mut best = ub;
                for si in cb.center_index.in_ball(&c, reach + 1e-12 * reach.max(1.0)) {
                    best = best.min(b.dist_to_box(&cb.squares[si]));
                }
                (best, best)
            }
            BoundaryModel::PointCloud(cl) => {
                let c = b.center();
                let (pi0, _) = cl.index.nearest(&c);
                let ub = b.dist_to_point(&cl.points[pi0]);
                let reach = ub + 0.5 * b.diam();
                let mut best = ub;
                for pi in cl.index.in_ball(&c, reach + 1e-12 * reach.max(1.0)) {
                    best = best.min(b.dist_to_point(&cl.points[pi]));
                }
                (best, best)
            }
        }
    }

    /// Validated surface ball Δ(x, r).
    pub fn surface_ball(&self, center: Point, r: f64) -> Result<SurfaceBall> {
        let tol = self.on_boundary_tolerance(&center);
        let dist = self.distance(&center);
        if dist > tol {
            return Err(GeomError::OffBoundary { dist, tol });
        }
        let max_r = self.diameter().unwrap_or(f64::INFINITY);
        if !(r > 0.0 && r.is_finite() && r <= max_r) {
            return Err(GeomError::RadiusRange { r, max: max_r });
        }
        Ok(SurfaceBall {
            center,
            r,
            model_tag: self.tag(),
        })
    }

    /// σ(Δ) = H^n(E ∩ B). Analytic variants exact (graph n=2 uses adaptive
    /// quadrature at 1e-9 relative tolerance); clouds sum member weights.
    pub fn sigma_ball(&self, delta: &SurfaceBall) -> Result<f64> {
        if delta.model_tag != self.tag() {
            return Err(GeomError::ForeignSurfaceBall);
        }
        let x = &delta.center;
        let r = delta.r;
        Ok(match self {
            BoundaryModel::Hyperplane { d, extent } => {
                let n = d - 1;
                match extent {
                    None => unit_ball_volume(n) * r.powi(n as i32),
                    Some(ext) => {
                        let chart: Vec<f64> = x.as_slice()[..n].to_vec();
                        // Center may sit above the plane within tolerance; the
                        // in-plane disk radius shrinks accordingly.
                        let h = x.coord(*d - 1);
                        let rr = (r * r - h * h).max(0.0).sqrt();
                        flat_disk_in_box(&chart, rr, ext)
                    }
                }
            }
            BoundaryModel::Sphere { d, radius } => {
                let r_eff = r.min(2.0 * radius);
                match d {
                    3 => std::f64::consts::PI * r_eff * r_eff,
                    2 => 4.0 * radius * (r_eff / (2.0 * radius)).clamp(-1.0, 1.0).asin(),
                    _ => unreachable!("sphere restricted to d in {{2,3}}"),
                }
            }
            BoundaryModel::LipschitzGraph { d, shape, extent } => {
                graph_sigma(*d, shape, extent.as_ref(), x, r)?
            }
            BoundaryModel::Polyhedral(p) => {
                let reach = r + p.max_face_half_diam;
                let mut total = 0.0;
                for fi in p.face_index.in_ball(x, reach + 1e-12 * reach) {
                    total += face_cap_area(&p.faces[fi], x, r);
                }
                total
            }
            BoundaryModel::FourCornerCantor(c) => {
                let density = (4.0f64).powi(c.depth as i32);
                let half_diag = 0.5 * c.squares[0].diam();
                let reach = r + half_diag;
                let mut total = 0.0;
                for si in c.center_index.in_ball(x, reach + 1e-12 * reach) {
                    let s = &c.squares[si];
                    total += density
                        * disk_rect_area_2d(
                            (x.coord(0), x.coord(1)),
                            r,
                            (
                                s.lo().coord(0),
                                s.hi().coord(0),
                                s.lo().coord(1),
                                s.hi().coord(1),
                            ),
                        );
                }
                total
            }
            BoundaryModel::PointCloud(c) => {
                let mut total = 0.0;
                for pi in c.index.in_ball(x, r) {
                    total += c.weights[pi];
                }
                total
            }
        })
    }

    /// Chart-to-ambient map for flat models (used by lattice grid builders).
    pub fn chart_to_ambient(&self, chart: &[f64]) -> Result<Point> {
        match self {
            BoundaryModel::Hyperplane { d, .. } => {
                if chart.len() != d - 1 {
                    return Err(GeomError::InvalidArgument("chart length != n".into()));
                }
                let mut coords = chart.to_vec();
                coords.push(0.0);
                Ok(Point::new(&coords))
            }
            BoundaryModel::LipschitzGraph { d, shape, .. } => {
                if chart.len() != d - 1 {
                    return Err(GeomError::InvalidArgument("chart length != n".into()));
                }
                let mut coords = chart.to_vec();
                coords.push(shape.eval(chart));
                Ok(Point::new(&coords))
            }
            _ => Err(GeomError::Unsupported("model has no global chart")),
        }
    }

    pub fn faces(&self) -> Option<&[Face]> {
        match self {
            BoundaryModel::Polyhedral(p) => Some(&p.faces),
            _ => None,
        }
    }

    pub fn cantor_squares(&self) -> Option<&[AxisBox]> {
        match self {
            BoundaryModel::FourCornerCantor(c) => Some(&c.squares),
            _ => None,
        }
    }

    pub fn cantor_depth(&self) -> Option<u32> {
        match self {
            BoundaryModel::FourCornerCantor(c) => Some(c.depth),
            _ => None,
        }
    }

    pub fn cloud(&self) -> Option<(&[Point], &[f64], f64)> {
        match self {
            BoundaryModel::PointCloud(c) => Some((&c.points, &c.weights, c.spacing)),
            _ => None,
        }
    }

    pub fn extent(&self) -> Option<&AxisBox> {
        match self {
            BoundaryModel::Hyperplane { extent, .. } => extent.as_ref(),
            BoundaryModel::LipschitzGraph { extent, .. } => extent.as_ref(),
            _ => None,
        }
    }
}

pub fn unit_ball_volume(n: usize) -> f64 {
    // Γ(n/2 + 1) via the recursion; exact for the small n in play.
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(n - 2) * 2.0 * std::f64::consts::PI / n as f64,
    }
}

/// Nearest point on the wedge {t = slope * |u|} to (a, b) in the (u, t) plane.
fn wedge_nearest_2d(a: f64, b: f64, slope: f64) -> (f64, f64) {
    let l2 = 1.0 + slope * slope;
    let mut best: Option<((f64, f64), f64)> = None;
    let mut consider = |foot: (f64, f64)| {
        let d2 = (a - foot.0).powi(2) + (b - foot.1).powi(2);
        match &best {
            Some((bf, bd)) => {
                if d2 < *bd || (d2 == *bd && (foot.0, foot.1) < (bf.0, bf.1)) {
                    best = Some((foot, d2));
                }
            }
            None => best = Some((foot, d2)),
        }
    };
    let p = (a + slope * b) / l2;
    if p >= 0.0 {
        consider((p, slope * p));
    }
    let q = (-a + slope * b) / l2;
    if q >= 0.0 {
        consider((-q, slope * q));
    }
    consider((0.0, 0.0));
    best.expect("wedge always offers the apex").0
}

fn point_seg_dist_2d(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let ab = (b.0 - a.0, b.1 - a.1);
    let len2 = ab.0 * ab.0 + ab.1 * ab.1;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * ab.0 + (p.1 - a.1) * ab.1) / len2).clamp(0.0, 1.0)
    };
    let f = (a.0 + t * ab.0, a.1 + t * ab.1);
    ((p.0 - f.0).powi(2) + (p.1 - f.1).powi(2)).sqrt()
}

fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn segs_intersect(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0))
        && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0))
    {
        return true;
    }
    // Collinear / endpoint contact counts as touching (distance zero).
    let on = |p: (f64, f64), q: (f64, f64), r: (f64, f64)| {
        orient(p, q, r) == 0.0
            && r.0 >= p.0.min(q.0)
            && r.0 <= p.0.max(q.0)
            && r.1 >= p.1.min(q.1)
            && r.1 <= p.1.max(q.1)
    };
    on(a, b, c) || on(a, b, d) || on(c, d, a) || on(c, d, b)
}

fn seg_seg_dist_2d(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> f64 {
    if segs_intersect(a, b, c, d) {
        return 0.0;
    }
    point_seg_dist_2d(a, c, d)
        .min(point_seg_dist_2d(b, c, d))
        .min(point_seg_dist_2d(c, a, b))
        .min(point_seg_dist_2d(d, a, b))
}

/// Distance from rect [u0,u1]x[t0,t1] to the wedge {t = slope|u|}, exactly.
fn wedge_rect_dist_2d(rect: &[f64; 4], slope: f64) -> f64 {
    let [u0, u1, t0, t1] = *rect;
    // Reach of the wedge needed to dominate every rect corner projection.
    let reach = [u0.abs(), u1.abs(), t0.abs() / slope, t1.abs() / slope]
        .into_iter()
        .fold(1.0, f64::max)
        * 2.0;
    let rays = [
        ((0.0, 0.0), (reach, slope * reach)),
        ((0.0, 0.0), (-reach, slope * reach)),
    ];
    let corners = [(u0, t0), (u1, t0), (u1, t1), (u0, t1)];
    let edges = [
        (corners[0], corners[1]),
        (corners[1], corners[2]),
        (corners[2], corners[3]),
        (corners[3], corners[0]),
    ];
    let mut best = f64::INFINITY;
    for ray in &rays {
        for e in &edges {
            best = best.min(seg_seg_dist_2d(ray.0, ray.1, e.0, e.1));
        }
    }
    best
}

/// Area of the disk B((cx,cy), r) ∩ rect [x0,x1]x[y0,y1], exact up to
/// floating error (piecewise analytic integration in x).
fn disk_rect_area_2d(center: (f64, f64), r: f64, rect: (f64, f64, f64, f64)) -> f64 {
    let (cx, cy) = center;
    let (x0, x1, y0, y1) = rect;
    if r <= 0.0 || x0 >= x1 || y0 >= y1 {
        return 0.0;
    }
    let ylo = y0 - cy;
    let yhi = y1 - cy;
    let a = (x0 - cx).max(-r);
    let b = (x1 - cx).min(r);
    if a >= b {
        return 0.0;
    }
    let mut breaks = vec![a, b];
    for y in [ylo, yhi] {
        if y.abs() < r {
            let x = (r * r - y * y).sqrt();
            for cand in [x, -x] {
                if cand > a && cand < b {
                    breaks.push(cand);
                }
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    // Antiderivative of sqrt(r^2 - x^2).
    let g = |x: f64| {
        let c = (x / r).clamp(-1.0, 1.0);
        0.5 * (x * (r * r - x * x).max(0.0).sqrt() + r * r * c.asin())
    };
    let mut area = 0.0;
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi - lo <= 0.0 {
            continue;
        }
        let m = 0.5 * (lo + hi);
        let wm = (r * r - m * m).max(0.0).sqrt();
        let up_curve = wm <= yhi;
        let down_curve = -wm >= ylo;
        let up_m = if up_curve { wm } else { yhi };
        let down_m = if down_curve { -wm } else { ylo };
        if up_m <= down_m {
            continue;
        }
        let mut piece = 0.0;
        if up_curve {
            piece += g(hi) - g(lo);
        } else {
            piece += yhi * (hi - lo);
        }
        if down_curve {
            piece += g(hi) - g(lo);
        } else {
            piece -= ylo * (hi - lo);
        }
        area += piece;
    }
    area
}

/// Area of the n-disk about `chart` of radius `r` clipped to `ext` (n ≤ 2).
fn flat_disk_in_box(chart: &[f64], r: f64, ext: &AxisBox) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    match chart.len() {
        1 => {
            let lo = (chart[0] - r).max(ext.lo().coord(0));
            let hi = (chart[0] + r).min(ext.hi().coord(0));
            (hi - lo).max(0.0)
        }
        2 => disk_rect_area_2d(
            (chart[0], chart[1]),
            r,
            (
                ext.lo().coord(0),
                ext.hi().coord(0),
                ext.lo().coord(1),
                ext.hi().coord(1),
            ),
        ),
        n => {
            // Higher-dimensional patches are out of the desk-scale contract.
            let _ = n;
            unit_ball_volume(chart.len()) * r.powi(chart.len() as i32)
        }
    }
}

/// H^{d-1} of face ∩ B(x, r): the in-plane cross section is a disk of radius
/// sqrt(r^2 - h^2) at the projected center.
fn face_cap_area(face: &Face, x: &Point, r: f64) -> f64 {
    let h = x.coord(face.axis) - face.offset();
    if h.abs() >= r {
        return 0.0;
    }
    let rho = (r * r - h * h).sqrt();
    let others: Vec<usize> = (0..face.rect.dim()).filter(|&i| i != face.axis).collect();
    match others.len() {
        1 => {
            let i = others[0];
            let lo = (x.coord(i) - rho).max(face.rect.lo().coord(i));
            let hi = (x.coord(i) + rho).min(face.rect.hi().coord(i));
            (hi - lo).max(0.0)
        }
        2 => {
            let (i, j) = (others[0], others[1]);
            disk_rect_area_2d(
                (x.coord(i), x.coord(j)),
                rho,
                (
                    face.rect.lo().coord(i),
                    face.rect.hi().coord(i),
                    face.rect.lo().coord(j),
                    face.rect.hi().coord(j),
                ),
            )
        }
        _ => unreachable!("faces live in ambient d <= 3"),
    }
}

fn graph_sigma(
    d: usize,
    shape: &GraphShape,
    extent: Option<&AxisBox>,
    x: &Point,
    r: f64,
) -> Result<f64> {
    let GraphShape::AbsSlope { slope } = shape;
    let s = *slope;
    let element = (1.0 + s * s).sqrt();
    let u0 = x.coord(0);
    let t0 = x.coord(d - 1);
    match d {
        2 => {
            // Solve (u-u0)^2 + (s|u| - t0)^2 <= r^2 per branch, exactly.
            let mut len = 0.0;
            for branch in [s, -s] {
                let aq = 1.0 + s * s;
                let bq = -2.0 * (u0 + branch * t0);
                let cq = u0 * u0 + t0 * t0 - r * r;
                let disc = bq * bq - 4.0 * aq * cq;
                if disc <= 0.0 {
                    continue;
                }
                let sq = disc.sqrt();
                let (mut lo, mut hi) = ((-bq - sq) / (2.0 * aq), (-bq + sq) / (2.0 * aq));
                if branch > 0.0 {
                    lo = lo.max(0.0);
                } else {
                    hi = hi.min(0.0);
                }
                if let Some(ext) = extent {
                    lo = lo.max(ext.lo().coord(0));
                    hi = hi.min(ext.hi().coord(0));
                }
                len += (hi - lo).max(0.0);
            }
            Ok(element * len)
        }
        3 => {
            let v0 = x.coord(1);
            let (mut ulo, mut uhi) = (u0 - r, u0 + r);
            let (mut vlo, mut vhi) = (f64::NEG_INFINITY, f64::INFINITY);
            if let Some(ext) = extent {
                ulo = ulo.max(ext.lo().coord(0));
                uhi = uhi.min(ext.hi().coord(0));
                vlo = ext.lo().coord(1);
                vhi = ext.hi().coord(1);
            }
            if ulo >= uhi {
                return Ok(0.0);
            }
            let f = |u: f64| {
                let g = r * r - (u - u0).powi(2) - (s * u.abs() - t0).powi(2);
                if g <= 0.0 {
                    return 0.0;
                }
                let w = g.sqrt();
                ((v0 + w).min(vhi) - (v0 - w).max(vlo)).max(0.0)
            };
            let tol = 1e-10 * r * r;
            let mut total = 0.0;
            for (a, b) in split_at_kink(ulo, uhi) {
                total += adaptive_simpson(&f, a, b, tol, 48);
            }
            Ok(element * total)
        }
        _ => Err(GeomError::Unsupported(
            "graph surface measure implemented for d in {2,3}",
        )),
    }
}

fn split_at_kink(lo: f64, hi: f64) -> Vec<(f64, f64)> {
    if lo < 0.0 && hi > 0.0 {
        vec![(lo, 0.0), (0.0, hi)]
    } else {
        vec![(lo, hi)]
    }
}

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        left + right + (left + right - whole) / 15.0
    } else {
        simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}
