//! Quasi-uniform boundary sampling: weighted point clouds whose weight sums
//! reproduce surface measure region by region.

use crate::boundary::{BoundaryModel, GraphShape};
use crate::boxes::AxisBox;
use crate::error::GeomError;
use crate::point::Point;
use crate::Result;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleCloud {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    pub spacing: f64,
}

impl SampleCloud {
    pub fn weight_sum(&self) -> f64 {
        crate::par::pairwise_sum(&self.weights)
    }

    pub fn into_model(self) -> Result<BoundaryModel> {
        BoundaryModel::point_cloud(self.points, self.weights, self.spacing)
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Deterministic quasi-uniform samples at target spacing `h`.
pub fn sample_boundary(e: &BoundaryModel, h: f64, seed: u64) -> Result<SampleCloud> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(GeomError::InvalidArgument(
            "target spacing must be positive".into(),
        ));
    }
    if let Some(diam) = e.diameter() {
        if h > diam {
            return Err(GeomError::SpacingTooCoarse { spacing: h, r: diam });
        }
    }
    match e {
        BoundaryModel::Hyperplane { d, extent } => {
            let ext = extent.as_ref().ok_or(GeomError::Unsupported(
                "sampling an unbounded plane; use the patch variant",
            ))?;
            let (points, weights) = chart_grid(ext, h, |chart| {
                let mut c = chart.to_vec();
                c.push(0.0);
                (Point::new(&c), 1.0)
            });
            let _ = d;
            Ok(SampleCloud {
                points,
                weights,
                spacing: h,
            })
        }
        BoundaryModel::LipschitzGraph { shape, extent, .. } => {
            let ext = extent.as_ref().ok_or(GeomError::Unsupported(
                "sampling an unbounded graph; use the patch variant",
            ))?;
            let GraphShape::AbsSlope { slope } = shape;
            let element = (1.0 + slope * slope).sqrt();
            let (points, weights) = chart_grid(ext, h, |chart| {
                let mut c = chart.to_vec();
                c.push(shape.eval(chart));
                (Point::new(&c), element)
            });
            Ok(SampleCloud {
                points,
                weights,
                spacing: h,
            })
        }
        BoundaryModel::Sphere { d: 3, radius } => {
            let area = 4.0 * std::f64::consts::PI * radius * radius;
            let count = ((area / (h * h)).round() as usize).max(8);
            let phase = splitmix64(seed) as f64 / u64::MAX as f64 * std::f64::consts::TAU;
            let golden = std::f64::consts::PI * (3.0 - (5.0f64).sqrt());
            let mut points = Vec::with_capacity(count);
            for i in 0..count {
                let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                let rho = (1.0 - z * z).max(0.0).sqrt();
                let th = golden * i as f64 + phase;
                points.push(Point::new(&[
                    radius * rho * th.cos(),
                    radius * rho * th.sin(),
                    radius * z,
                ]));
            }
            Ok(SampleCloud {
                weights: vec![area / count as f64; count],
                points,
                spacing: h,
            })
        }
        BoundaryModel::Sphere { d: 2, radius } => {
            let len = std::f64::consts::TAU * radius;
            let count = ((len / h).round() as usize).max(8);
            let phase = splitmix64(seed) as f64 / u64::MAX as f64 * std::f64::consts::TAU;
            let points = (0..count)
                .map(|i| {
                    let th = std::f64::consts::TAU * i as f64 / count as f64 + phase;
                    Point::new(&[radius * th.cos(), radius * th.sin()])
                })
                .collect();
            Ok(SampleCloud {
                weights: vec![len / count as f64; count],
                points,
                spacing: h,
            })
        }
        BoundaryModel::Sphere { .. } => Err(GeomError::Unsupported("sphere sampling needs d in {2,3}")),
        BoundaryModel::Polyhedral(_) => {
            let faces = e.faces().expect("polyhedral model exposes faces");
            let mut points = Vec::new();
            let mut weights = Vec::new();
            for face in faces {
                let axis = face.axis;
                let offset = face.offset();
                let others: Vec<usize> =
                    (0..face.rect.dim()).filter(|&i| i != axis).collect();
                let lo: Vec<f64> = others.iter().map(|&i| face.rect.lo().coord(i)).collect();
                let hi: Vec<f64> = others.iter().map(|&i| face.rect.hi().coord(i)).collect();
                let sub = AxisBox::new(Point::new(&lo), Point::new(&hi));
                let (ps, ws) = chart_grid(&sub, h, |chart| {
                    let mut c = vec![0.0; face.rect.dim()];
                    c[axis] = offset;
                    for (k, &i) in others.iter().enumerate() {
                        c[i] = chart[k];
                    }
                    (Point::new(&c), 1.0)
                });
                points.extend(ps);
                weights.extend(ws);
            }
            Ok(SampleCloud {
                points,
                weights,
                spacing: h,
            })
        }
        BoundaryModel::FourCornerCantor(_) => {
            let depth = e.cantor_depth().expect("cantor model exposes depth");
            let gen = ((1.0 / h).log(4.0).ceil().max(0.0) as u32).min(depth);
            let mut squares = vec![AxisBox::new(Point::zeros(2), Point::new(&[1.0, 1.0]))];
            for _ in 0..gen {
                let mut next = Vec::with_capacity(squares.len() * 4);
                for s in &squares {
                    let side = s.side(0) / 4.0;
                    for (cx, cy) in [(0.0, 0.0), (3.0, 0.0), (0.0, 3.0), (3.0, 3.0)] {
                        let lo = Point::new(&[
                            s.lo().coord(0) + cx * side,
                            s.lo().coord(1) + cy * side,
                        ]);
                        let hi = Point::new(&[lo.coord(0) + side, lo.coord(1) + side]);
                        next.push(AxisBox::new(lo, hi));
                    }
                }
                squares = next;
            }
            let w = (4.0f64).powi(-(gen as i32));
            // Corner squares persist through every deeper generation, so the
            // lo corner of a generation-g square lies on the set itself.
            Ok(SampleCloud {
                points: squares.iter().map(|s| s.lo().clone()).collect(),
                weights: vec![w; squares.len()],
                spacing: h,
            })
        }
        BoundaryModel::PointCloud(_) => Err(GeomError::Unsupported(
            "model is already a weighted sample",
        )),
    }
}

/// Uniform cells over a chart box; `lift` maps a cell center to an ambient
/// point and a measure-density factor (weight = factor * cell volume).
fn chart_grid<F: Fn(&[f64]) -> (Point, f64)>(
    ext: &AxisBox,
    h: f64,
    lift: F,
) -> (Vec<Point>, Vec<f64>) {
    let n = ext.dim();
    let counts: Vec<usize> = (0..n)
        .map(|i| ((ext.side(i) / h).ceil() as usize).max(1))
        .collect();
    let steps: Vec<f64> = (0..n).map(|i| ext.side(i) / counts[i] as f64).collect();
    let cell_vol: f64 = steps.iter().product();
    let total: usize = counts.iter().product();
    let mut points = Vec::with_capacity(total);
    let mut weights = Vec::with_capacity(total);
    let mut idx = vec![0usize; n];
    loop {
        let chart: Vec<f64> = (0..n)
            .map(|i| ext.lo().coord(i) + (idx[i] as f64 + 0.5) * steps[i])
            .collect();
        let (p, factor) = lift(&chart);
        points.push(p);
        weights.push(factor * cell_vol);
        let mut axis = 0;
        loop {
            if axis == n {
                return (points, weights);
            }
            idx[axis] += 1;
            if idx[axis] < counts[axis] {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
    }
}
