//! Shortest interior corridors through a Whitney decomposition: A* over
//! the face-adjacency graph, with crossing points on shared faces so the
//! returned polyline stays inside the cube union.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use geom::{AxisBox, Point};
use whitney::{WhitneyDecomposition, WhitneyId};

use crate::error::{ConnectivityError, Result};

/// True when the closed cubes share a face of positive area: contact is
/// flat along exactly one axis and the overlap has extent on every other.
pub fn face_touching(a: &AxisBox, b: &AxisBox) -> bool {
    let cap = match a.intersection(b) {
        Some(c) => c,
        None => return false,
    };
    let dim = a.lo().dim();
    let mut flat = 0;
    for i in 0..dim {
        if cap.side(i) <= 0.0 {
            flat += 1;
        }
    }
    flat == 1
}

#[derive(PartialEq)]
struct QueueItem {
    priority: f64,
    id: WhitneyId,
}

impl Eq for QueueItem {}

impl Ord for QueueItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on priority; BinaryHeap is a max-heap
        other
            .priority
            .partial_cmp(&self.priority)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.id.cmp(&self.id))
    }
}

impl PartialOrd for QueueItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Cube-id path from `start` to `goal` through face-touching neighbors,
/// minimizing summed center-to-center length.
pub fn astar_cubes(
    decomp: &WhitneyDecomposition,
    start: WhitneyId,
    goal: WhitneyId,
) -> Result<Vec<WhitneyId>> {
    let center = |id: WhitneyId| decomp.get(id).cube.center();
    let goal_center = center(goal);
    let h = |id: WhitneyId| center(id).dist(&goal_center);

    let mut best_g: HashMap<WhitneyId, f64> = HashMap::new();
    let mut came: HashMap<WhitneyId, WhitneyId> = HashMap::new();
    let mut open = BinaryHeap::new();
    best_g.insert(start, 0.0);
    open.push(QueueItem {
        priority: h(start),
        id: start,
    });

    while let Some(QueueItem { id, priority }) = open.pop() {
        let g = best_g[&id];
        if priority > g + h(id) + 1e-12 {
            continue; // stale entry
        }
        if id == goal {
            let mut path = vec![id];
            let mut cur = id;
            while let Some(&prev) = came.get(&cur) {
                path.push(prev);
                cur = prev;
            }
            path.reverse();
            return Ok(path);
        }
        let me = decomp.get(id);
        for nb in decomp.neighbors(id) {
            if !face_touching(&me.cube, &decomp.get(nb).cube) {
                continue;
            }
            let cand = g + center(id).dist(&center(nb));
            if best_g.get(&nb).map_or(true, |&old| cand < old - 1e-15) {
                best_g.insert(nb, cand);
                came.insert(nb, id);
                open.push(QueueItem {
                    priority: cand + h(nb),
                    id: nb,
                });
            }
        }
    }
    Err(ConnectivityError::Disconnected)
}

/// Polyline through the cube path: cube centers joined via the center of
/// each shared face, so every segment stays inside one closed cube.
pub fn polyline_through(decomp: &WhitneyDecomposition, path: &[WhitneyId]) -> Vec<Point> {
    let mut pts = Vec::with_capacity(2 * path.len());
    for (i, &id) in path.iter().enumerate() {
        let cube = &decomp.get(id).cube;
        pts.push(cube.center());
        if let Some(&next) = path.get(i + 1) {
            if let Some(cap) = cube.intersection(&decomp.get(next).cube) {
                pts.push(cap.center());
            }
        }
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use geom::BoundaryModel;
    use whitney::{decompose, SideFilter};

    fn strip_decomp() -> WhitneyDecomposition {
        let model = BoundaryModel::hyperplane(2);
        let window = AxisBox::new(Point::new(&[-2.0, 0.0]), Point::new(&[2.0, 2.0]));
        decompose(&model, &window, SideFilter::Interior, 5).unwrap()
    }

    #[test]
    fn face_touching_rejects_corner_contact() {
        let unit = |lo: [f64; 2]| {
            AxisBox::new(Point::new(&lo), Point::new(&[lo[0] + 1.0, lo[1] + 1.0]))
        };
        let a = unit([0.0, 0.0]);
        assert!(face_touching(&a, &unit([1.0, 0.0])), "shared edge");
        assert!(face_touching(&a, &unit([1.0, 0.5])), "offset shared edge");
        assert!(!face_touching(&a, &unit([1.0, 1.0])), "corner only");
        assert!(!face_touching(&a, &unit([2.0, 0.0])), "separated");
        assert!(!face_touching(&a, &unit([0.5, 0.5])), "solid overlap");
    }

    #[test]
    fn astar_connects_lateral_cubes_and_polyline_stays_inside() {
        let decomp = strip_decomp();
        let a = decomp
            .locate(&Point::new(&[-1.5, 1.0]))
            .expect("left probe must be covered");
        let b = decomp
            .locate(&Point::new(&[1.5, 1.0]))
            .expect("right probe must be covered");
        let path = astar_cubes(&decomp, a, b).expect("same-side cubes must connect");
        assert_eq!(*path.first().unwrap(), a, "path starts at the start cube");
        assert_eq!(*path.last().unwrap(), b, "path ends at the goal cube");
        for pair in path.windows(2) {
            assert!(
                face_touching(&decomp.get(pair[0]).cube, &decomp.get(pair[1]).cube),
                "consecutive path cubes must share a face"
            );
        }
        let poly = polyline_through(&decomp, &path);
        for p in &poly {
            assert!(
                p.coord(1) > 0.0,
                "polyline point {:?} left the open half-plane",
                p
            );
        }
    }

    #[test]
    fn astar_reports_disconnected_components() {
        let model = BoundaryModel::hyperplane(2);
        let window = AxisBox::new(Point::new(&[-2.0, -2.0]), Point::new(&[2.0, 2.0]));
        let decomp = decompose(&model, &window, SideFilter::Both, 5).unwrap();
        let up = decomp
            .locate(&Point::new(&[0.0, 1.0]))
            .expect("upper probe");
        let down = decomp
            .locate(&Point::new(&[0.0, -1.0]))
            .expect("lower probe");
        match astar_cubes(&decomp, up, down) {
            Err(ConnectivityError::Disconnected) => {}
            other => panic!("opposite sides must not connect, got {:?}", other.map(|p| p.len())),
        }
    }
}
