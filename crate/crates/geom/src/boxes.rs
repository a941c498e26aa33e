//! Axis-aligned boxes and unions of boxes. These carry the membership oracles
//! for Whitney regions, Carleson boxes, and sawtooth domains.

use crate::point::Point;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Closed axis-aligned box `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisBox {
    lo: Point,
    hi: Point,
}

impl AxisBox {
    pub fn new(lo: Point, hi: Point) -> Self {
        assert_eq!(lo.dim(), hi.dim());
        for i in 0..lo.dim() {
            assert!(lo.coord(i) <= hi.coord(i), "box with inverted axis {i}");
        }
        AxisBox { lo, hi }
    }

    /// Dyadic lattice cube `[idx * 2^-k, (idx+1) * 2^-k]` per axis.
    pub fn from_lattice(k: i32, idx: &[i64]) -> Self {
        let ell = (2.0f64).powi(-k);
        let lo: Vec<f64> = idx.iter().map(|&i| i as f64 * ell).collect();
        let hi: Vec<f64> = idx.iter().map(|&i| (i + 1) as f64 * ell).collect();
        AxisBox::new(Point::new(&lo), Point::new(&hi))
    }

    pub fn from_center_half(center: &Point, half: f64) -> Self {
        assert!(half > 0.0);
        let d = center.dim();
        let lo: Vec<f64> = (0..d).map(|i| center.coord(i) - half).collect();
        let hi: Vec<f64> = (0..d).map(|i| center.coord(i) + half).collect();
        AxisBox::new(Point::new(&lo), Point::new(&hi))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    #[inline]
    pub fn lo(&self) -> &Point {
        &self.lo
    }

    #[inline]
    pub fn hi(&self) -> &Point {
        &self.hi
    }

    pub fn center(&self) -> Point {
        self.lo.midpoint(&self.hi)
    }

    #[inline]
    pub fn side(&self, i: usize) -> f64 {
        self.hi.coord(i) - self.lo.coord(i)
    }

    pub fn max_side(&self) -> f64 {
        (0..self.dim()).map(|i| self.side(i)).fold(0.0, f64::max)
    }

    pub fn min_side(&self) -> f64 {
        (0..self.dim())
            .map(|i| self.side(i))
            .fold(f64::INFINITY, f64::min)
    }

    /// Euclidean diameter (corner-to-corner).
    pub fn diam(&self) -> f64 {
        self.lo.dist(&self.hi)
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|i| self.side(i)).product()
    }

    /// Concentric dilation by `factor` (1.0 is the identity).
    pub fn dilate(&self, factor: f64) -> AxisBox {
        assert!(factor > 0.0);
        let c = self.center();
        let d = self.dim();
        let lo: Vec<f64> = (0..d)
            .map(|i| c.coord(i) - 0.5 * factor * self.side(i))
            .collect();
        let hi: Vec<f64> = (0..d)
            .map(|i| c.coord(i) + 0.5 * factor * self.side(i))
            .collect();
        AxisBox::new(Point::new(&lo), Point::new(&hi))
    }

    #[inline]
    pub fn contains(&self, p: &Point) -> bool {
        (0..self.dim()).all(|i| p.coord(i) >= self.lo.coord(i) && p.coord(i) <= self.hi.coord(i))
    }

    #[inline]
    pub fn interior_contains(&self, p: &Point) -> bool {
        (0..self.dim()).all(|i| p.coord(i) > self.lo.coord(i) && p.coord(i) < self.hi.coord(i))
    }

    pub fn dist_sq_to_point(&self, p: &Point) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim() {
            let c = p.coord(i);
            let d = if c < self.lo.coord(i) {
                self.lo.coord(i) - c
            } else if c > self.hi.coord(i) {
                c - self.hi.coord(i)
            } else {
                0.0
            };
            s += d * d;
        }
        s
    }

    pub fn dist_to_point(&self, p: &Point) -> f64 {
        self.dist_sq_to_point(p).sqrt()
    }

    /// Euclidean distance between two closed boxes (0 when they meet).
    pub fn dist_to_box(&self, other: &AxisBox) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim() {
            let gap = (other.lo.coord(i) - self.hi.coord(i))
                .max(self.lo.coord(i) - other.hi.coord(i))
                .max(0.0);
            s += gap * gap;
        }
        s.sqrt()
    }

    /// Distance from `p` to the farthest point of the box.
    pub fn farthest_dist_to_point(&self, p: &Point) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim() {
            let d = (p.coord(i) - self.lo.coord(i))
                .abs()
                .max((p.coord(i) - self.hi.coord(i)).abs());
            s += d * d;
        }
        s.sqrt()
    }

    /// Point of the box closest to `p` (componentwise clamp).
    pub fn clamp_point(&self, p: &Point) -> Point {
        let coords: Vec<f64> = (0..self.dim())
            .map(|i| p.coord(i).clamp(self.lo.coord(i), self.hi.coord(i)))
            .collect();
        Point::new(&coords)
    }

    pub fn intersects(&self, other: &AxisBox) -> bool {
        (0..self.dim())
            .all(|i| self.lo.coord(i) <= other.hi.coord(i) && other.lo.coord(i) <= self.hi.coord(i))
    }

    pub fn interiors_intersect(&self, other: &AxisBox) -> bool {
        (0..self.dim())
            .all(|i| self.lo.coord(i) < other.hi.coord(i) && other.lo.coord(i) < self.hi.coord(i))
    }

    /// Closed boxes meet but interiors do not: they share boundary only.
    pub fn touches(&self, other: &AxisBox) -> bool {
        self.intersects(other) && !self.interiors_intersect(other)
    }

    pub fn intersection(&self, other: &AxisBox) -> Option<AxisBox> {
        if !self.intersects(other) {
            return None;
        }
        let d = self.dim();
        let lo: Vec<f64> = (0..d)
            .map(|i| self.lo.coord(i).max(other.lo.coord(i)))
            .collect();
        let hi: Vec<f64> = (0..d)
            .map(|i| self.hi.coord(i).min(other.hi.coord(i)))
            .collect();
        Some(AxisBox::new(Point::new(&lo), Point::new(&hi)))
    }

    pub fn union_bounds(&self, other: &AxisBox) -> AxisBox {
        let d = self.dim();
        let lo: Vec<f64> = (0..d)
            .map(|i| self.lo.coord(i).min(other.lo.coord(i)))
            .collect();
        let hi: Vec<f64> = (0..d)
            .map(|i| self.hi.coord(i).max(other.hi.coord(i)))
            .collect();
        AxisBox::new(Point::new(&lo), Point::new(&hi))
    }

    /// Splits into `m^d` equal subcells.
    pub fn split(&self, m: usize) -> Vec<AxisBox> {
        assert!(m >= 1);
        let d = self.dim();
        let mut out = Vec::with_capacity(m.pow(d as u32));
        let mut idx = vec![0usize; d];
        loop {
            let lo: Vec<f64> = (0..d)
                .map(|i| self.lo.coord(i) + self.side(i) * idx[i] as f64 / m as f64)
                .collect();
            let hi: Vec<f64> = (0..d)
                .map(|i| self.lo.coord(i) + self.side(i) * (idx[i] + 1) as f64 / m as f64)
                .collect();
            out.push(AxisBox::new(Point::new(&lo), Point::new(&hi)));
            let mut axis = 0;
            loop {
                if axis == d {
                    return out;
                }
                idx[axis] += 1;
                if idx[axis] < m {
                    break;
                }
                idx[axis] = 0;
                axis += 1;
            }
        }
    }

    pub fn corners(&self) -> Vec<Point> {
        let d = self.dim();
        (0..(1usize << d))
            .map(|mask| {
                let coords: Vec<f64> = (0..d)
                    .map(|i| {
                        if mask >> i & 1 == 0 {
                            self.lo.coord(i)
                        } else {
                            self.hi.coord(i)
                        }
                    })
                    .collect();
                Point::new(&coords)
            })
            .collect()
    }
}

const INTERIOR_PROBE_SCALE: f64 = 1e-6;

/// Union of closed axis boxes with hashed lookup by size class.
///
/// Interior membership follows the sampled-ball rule: a point is interior iff
/// a ball of radius `1e-6 * local side` around it stays inside the union,
/// sampled over all 3^d - 1 sign directions.
#[derive(Clone, Debug)]
pub struct CubeUnion {
    boxes: Vec<AxisBox>,
    // size-class id -> (cell width, cell -> box indices)
    levels: Vec<(f64, HashMap<Vec<i64>, Vec<u32>>)>,
    bounds: Option<AxisBox>,
}

fn cell_of(p: &Point, width: f64) -> Vec<i64> {
    (0..p.dim())
        .map(|i| (p.coord(i) / width).floor() as i64)
        .collect()
}

impl CubeUnion {
    pub fn new(boxes: Vec<AxisBox>) -> Self {
        let mut levels: Vec<(f64, HashMap<Vec<i64>, Vec<u32>>)> = Vec::new();
        let mut bounds: Option<AxisBox> = None;
        for (bi, b) in boxes.iter().enumerate() {
            bounds = Some(match bounds {
                None => b.clone(),
                Some(u) => u.union_bounds(b),
            });
            // Cell width is the box's max side rounded up to a power of two,
            // so each box lands in a bounded number of cells.
            let width = round_up_pow2(b.max_side());
            let level = match levels
                .iter()
                .position(|(w, _)| (*w - width).abs() < 1e-12 * width)
            {
                Some(i) => i,
                None => {
                    levels.push((width, HashMap::new()));
                    levels.len() - 1
                }
            };
            let (w, map) = &mut levels[level];
            let lo_cell = cell_of(b.lo(), *w);
            let hi_cell = cell_of(b.hi(), *w);
            let d = b.dim();
            let mut idx = lo_cell.clone();
            'fill: loop {
                map.entry(idx.clone()).or_default().push(bi as u32);
                let mut axis = 0;
                loop {
                    if axis == d {
                        break 'fill;
                    }
                    idx[axis] += 1;
                    if idx[axis] <= hi_cell[axis] {
                        break;
                    }
                    idx[axis] = lo_cell[axis];
                    axis += 1;
                }
            }
        }
        CubeUnion {
            boxes,
            levels,
            bounds,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn boxes(&self) -> &[AxisBox] {
        &self.boxes
    }

    pub fn bounds(&self) -> Option<&AxisBox> {
        self.bounds.as_ref()
    }

    pub fn volume_upper_bound(&self) -> f64 {
        self.boxes.iter().map(|b| b.volume()).sum()
    }

    fn candidate_boxes<'a>(&'a self, p: &Point) -> impl Iterator<Item = u32> + 'a {
        let cells: Vec<(usize, Vec<i64>)> = self
            .levels
            .iter()
            .enumerate()
            .map(|(li, (w, _))| (li, cell_of(p, *w)))
            .collect();
        cells.into_iter().flat_map(move |(li, cell)| {
            self.levels[li]
                .1
                .get(&cell)
                .map(|v| v.as_slice())
                .unwrap_or(&[])
                .iter()
                .copied()
        })
    }

    /// Membership in the closed union.
    pub fn contains(&self, p: &Point) -> bool {
        self.candidate_boxes(p)
            .any(|bi| self.boxes[bi as usize].contains(p))
    }

    /// Number of member boxes containing `p`; used to de-overlap quadrature.
    pub fn multiplicity(&self, p: &Point) -> usize {
        self.candidate_boxes(p)
            .filter(|&bi| self.boxes[bi as usize].contains(p))
            .count()
    }

    /// Largest side among boxes containing `p`, if any.
    pub fn local_side(&self, p: &Point) -> Option<f64> {
        self.candidate_boxes(p)
            .filter(|&bi| self.boxes[bi as usize].contains(p))
            .map(|bi| self.boxes[bi as usize].max_side())
            .fold(None, |acc, s| Some(acc.map_or(s, |a: f64| a.max(s))))
    }

    /// Interior test by the sampled-ball rule.
    pub fn interior_contains(&self, p: &Point) -> bool {
        let Some(side) = self.local_side(p) else {
            return false;
        };
        let r = INTERIOR_PROBE_SCALE * side;
        let d = p.dim();
        let mut dirs = vec![0i32; d];
        loop {
            // advance odometer over {-1,0,1}^d
            let mut axis = 0;
            loop {
                if axis == d {
                    return true;
                }
                dirs[axis] += 1;
                if dirs[axis] <= 1 {
                    break;
                }
                dirs[axis] = -1;
                axis += 1;
            }
            if dirs.iter().all(|&s| s == 0) {
                continue;
            }
            let norm = (dirs.iter().map(|&s| (s * s) as f64).sum::<f64>()).sqrt();
            let probe_coords: Vec<f64> = (0..d)
                .map(|i| p.coord(i) + r * dirs[i] as f64 / norm)
                .collect();
            if !self.contains(&Point::new(&probe_coords)) {
                return false;
            }
        }
    }
}

fn round_up_pow2(x: f64) -> f64 {
    assert!(x > 0.0);
    (2.0f64).powi(x.log2().ceil() as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_box(d: usize) -> AxisBox {
        AxisBox::new(Point::zeros(d), Point::new(&vec![1.0; d]))
    }

    #[test]
    fn dilation_is_concentric() {
        let b = unit_box(3);
        let f = b.dilate(1.1);
        assert_eq!(f.center(), b.center());
        assert!((f.side(0) - 1.1).abs() < 1e-15);
    }

    #[test]
    fn touching_vs_overlapping() {
        let a = unit_box(2);
        let shifted = AxisBox::new(Point::new(&[1.0, 0.0]), Point::new(&[2.0, 1.0]));
        assert!(a.touches(&shifted));
        assert!(!a.interiors_intersect(&shifted));
        assert!(a.dilate(1.05).interiors_intersect(&shifted.dilate(1.05)));
    }

    #[test]
    fn split_partitions_volume() {
        let b = unit_box(3);
        let parts = b.split(2);
        assert_eq!(parts.len(), 8);
        let v: f64 = parts.iter().map(|p| p.volume()).sum();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn union_membership_and_interior() {
        let a = unit_box(2);
        let b = AxisBox::new(Point::new(&[1.0, 0.0]), Point::new(&[2.0, 1.0]));
        let u = CubeUnion::new(vec![a, b]);
        // Point on the shared face is in the closed union and interior to it:
        // probes on both sides land in one of the two boxes.
        let seam = Point::new(&[1.0, 0.5]);
        assert!(u.contains(&seam));
        assert_eq!(u.multiplicity(&seam), 2);
        assert!(u.interior_contains(&seam));
        // A point on the outer rim is not interior.
        let rim = Point::new(&[0.0, 0.5]);
        assert!(u.contains(&rim));
        assert!(!u.interior_contains(&rim));
        assert!(!u.contains(&Point::new(&[2.5, 0.5])));
    }

    #[test]
    fn lattice_cube_arithmetic() {
        let c = AxisBox::from_lattice(2, &[1, -1]);
        assert!((c.lo().coord(0) - 0.25).abs() < 1e-15);
        assert!((c.lo().coord(1) + 0.25).abs() < 1e-15);
        assert!((c.volume() - 0.0625).abs() < 1e-15);
    }
}
