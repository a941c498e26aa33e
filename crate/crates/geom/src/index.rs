//! Static kd-tree over a point cloud. Built once, queried many times.

use crate::point::Point;

/// Balanced kd-tree storing indices into the caller's point slice.
#[derive(Clone, Debug)]
pub struct SpatialIndex {
    points: Vec<Point>,
    // nodes[i] holds the point index at tree position i (implicit binary heap layout
    // would waste space for unbalanced sizes; we store an explicit recursion instead).
    order: Vec<u32>,
    dim: usize,
}

impl SpatialIndex {
    pub fn build(points: Vec<Point>) -> Self {
        assert!(!points.is_empty(), "index over empty cloud");
        let dim = points[0].dim();
        assert!(points.iter().all(|p| p.dim() == dim));
        let mut order: Vec<u32> = (0..points.len() as u32).collect();
        build_rec(&points, &mut order, 0, dim);
        SpatialIndex { points, order, dim }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Nearest member point: (index, distance).
    pub fn nearest(&self, q: &Point) -> (usize, f64) {
        self.nearest_filtered(q, |_| true)
            .expect("nonempty index always has a nearest point")
    }

    /// Nearest member point passing `keep`, if any.
    pub fn nearest_filtered<F: Fn(usize) -> bool>(&self, q: &Point, keep: F) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        self.nearest_rec(q, &keep, 0, self.order.len(), 0, &mut best);
        best.map(|(i, d2)| (i, d2.sqrt()))
    }

    fn nearest_rec<F: Fn(usize) -> bool>(
        &self,
        q: &Point,
        keep: &F,
        lo: usize,
        hi: usize,
        depth: usize,
        best: &mut Option<(usize, f64)>,
    ) {
        if lo >= hi {
            return;
        }
        let mid = (lo + hi) / 2;
        let pi = self.order[mid] as usize;
        let node = &self.points[pi];
        if keep(pi) {
            let d2 = q.dist_sq(node);
            if best.map_or(true, |(_, b)| d2 < b) {
                *best = Some((pi, d2));
            }
        }
        let axis = depth % self.dim;
        let delta = q.coord(axis) - node.coord(axis);
        let (first, second) = if delta < 0.0 {
            ((lo, mid), (mid + 1, hi))
        } else {
            ((mid + 1, hi), (lo, mid))
        };
        self.nearest_rec(q, keep, first.0, first.1, depth + 1, best);
        if best.map_or(true, |(_, b)| delta * delta < b) {
            self.nearest_rec(q, keep, second.0, second.1, depth + 1, best);
        }
    }

    /// Indices of all member points within closed distance `r` of `q`.
    pub fn in_ball(&self, q: &Point, r: f64) -> Vec<usize> {
        assert!(r >= 0.0);
        let mut out = Vec::new();
        self.in_ball_rec(q, r * r, 0, self.order.len(), 0, &mut out);
        out
    }

    fn in_ball_rec(
        &self,
        q: &Point,
        r2: f64,
        lo: usize,
        hi: usize,
        depth: usize,
        out: &mut Vec<usize>,
    ) {
        if lo >= hi {
            return;
        }
        let mid = (lo + hi) / 2;
        let pi = self.order[mid] as usize;
        let node = &self.points[pi];
        if q.dist_sq(node) <= r2 {
            out.push(pi);
        }
        let axis = depth % self.dim;
        let delta = q.coord(axis) - node.coord(axis);
        if delta < 0.0 || delta * delta <= r2 {
            self.in_ball_rec(q, r2, lo, mid, depth + 1, out);
        }
        if delta >= 0.0 || delta * delta <= r2 {
            self.in_ball_rec(q, r2, mid + 1, hi, depth + 1, out);
        }
    }
}

fn build_rec(points: &[Point], order: &mut [u32], depth: usize, dim: usize) {
    if order.len() <= 1 {
        return;
    }
    let axis = depth % dim;
    let mid = order.len() / 2;
    order.select_nth_unstable_by(mid, |&a, &b| {
        points[a as usize]
            .coord(axis)
            .total_cmp(&points[b as usize].coord(axis))
    });
    let (left, rest) = order.split_at_mut(mid);
    build_rec(points, left, depth + 1, dim);
    build_rec(points, &mut rest[1..], depth + 1, dim);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_cloud(n: usize, d: usize, seed: u64) -> Vec<Point> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let c: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
                Point::new(&c)
            })
            .collect()
    }

    #[test]
    fn nearest_matches_linear_scan() {
        let cloud = random_cloud(500, 3, 11);
        let idx = SpatialIndex::build(cloud.clone());
        let queries = random_cloud(50, 3, 12);
        for q in &queries {
            let (bi, bd) = idx.nearest(q);
            let (li, ld) = cloud
                .iter()
                .enumerate()
                .map(|(i, p)| (i, q.dist(p)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert_eq!(bi, li, "nearest index mismatch at query {q:?}");
            assert!((bd - ld).abs() < 1e-12);
        }
    }

    #[test]
    fn ball_query_matches_linear_scan() {
        let cloud = random_cloud(400, 2, 21);
        let idx = SpatialIndex::build(cloud.clone());
        let q = Point::new(&[0.1, -0.2]);
        for r in [0.05, 0.3, 1.0] {
            let mut got = idx.in_ball(&q, r);
            got.sort_unstable();
            let want: Vec<usize> = cloud
                .iter()
                .enumerate()
                .filter(|(_, p)| q.dist(p) <= r)
                .map(|(i, _)| i)
                .collect();
            assert_eq!(got, want, "ball query mismatch at r={r}");
        }
    }

    #[test]
    fn filtered_nearest_skips_rejected() {
        let cloud = vec![
            Point::new(&[0.0, 0.0]),
            Point::new(&[1.0, 0.0]),
            Point::new(&[2.0, 0.0]),
        ];
        let idx = SpatialIndex::build(cloud);
        let q = Point::new(&[0.1, 0.0]);
        let (i, _) = idx.nearest_filtered(&q, |i| i != 0).unwrap();
        assert_eq!(i, 1);
        assert!(idx.nearest_filtered(&q, |_| false).is_none());
    }
}
