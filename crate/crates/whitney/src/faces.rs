//! Exact boundary-face extraction for unions of axis boxes: a face piece
//! survives iff stepping outward from it leaves the union.

use geom::{AxisBox, Face, Point, SpatialIndex};

/// Boundary of the union of closed boxes as a list of axis-aligned faces with
/// outward normals. Exact up to float comparison of face planes.
pub fn extract_faces(boxes: &[AxisBox]) -> Vec<Face> {
    let mut out = Vec::new();
    if boxes.is_empty() {
        return out;
    }
    let d = boxes[0].dim();
    // blockers must meet the closed face rectangle; a center index plus the
    // largest half-diagonal screens the rest out
    let index = if boxes.len() > 64 {
        let centers: Vec<Point> = boxes.iter().map(|b| b.center()).collect();
        let max_half = boxes.iter().map(|b| 0.5 * b.diam()).fold(0.0f64, f64::max);
        Some((SpatialIndex::build(centers), max_half))
    } else {
        None
    };
    for (i, b) in boxes.iter().enumerate() {
        for axis in 0..d {
            for s in [-1.0f64, 1.0] {
                let v = if s < 0.0 {
                    b.lo().coord(axis)
                } else {
                    b.hi().coord(axis)
                };
                let rect = face_rect(b, axis, v);
                let candidates: Vec<usize> = match &index {
                    Some((idx, max_half)) => {
                        let r = 0.5 * rect.diam() + max_half;
                        idx.in_ball(&rect.center(), r * (1.0 + 1e-12) + 1e-300)
                    }
                    None => (0..boxes.len()).collect(),
                };
                let mut pieces = vec![rect];
                for j in candidates {
                    let c = &boxes[j];
                    if j == i || pieces.is_empty() {
                        continue;
                    }
                    // coplanar faces are assigned to the earliest box
                    let same_plane = j < i
                        && if s > 0.0 {
                            c.hi().coord(axis) == v
                        } else {
                            c.lo().coord(axis) == v
                        };
                    if !covers_outward(c, axis, v, s) && !same_plane {
                        continue;
                    }
                    let blocker = face_rect(c, axis, v);
                    pieces = pieces
                        .into_iter()
                        .flat_map(|p| subtract(p, &blocker, axis))
                        .collect();
                }
                for p in pieces {
                    out.push(Face::new(axis, p, s));
                }
            }
        }
    }
    out
}

/// Whether box `c` occupies the outward side of the plane {x_axis = v}.
fn covers_outward(c: &AxisBox, axis: usize, v: f64, s: f64) -> bool {
    let lo = c.lo().coord(axis);
    let hi = c.hi().coord(axis);
    if lo < v && hi > v {
        return true;
    }
    if s > 0.0 {
        lo == v && hi > v
    } else {
        hi == v && lo < v
    }
}

/// The box collapsed onto the plane {x_axis = v}.
fn face_rect(b: &AxisBox, axis: usize, v: f64) -> AxisBox {
    let d = b.dim();
    let lo: Vec<f64> = (0..d)
        .map(|i| if i == axis { v } else { b.lo().coord(i) })
        .collect();
    let hi: Vec<f64> = (0..d)
        .map(|i| if i == axis { v } else { b.hi().coord(i) })
        .collect();
    AxisBox::new(Point::new(&lo), Point::new(&hi))
}

/// piece \ blocker on the free axes, as disjoint rectangles.
fn subtract(piece: AxisBox, blocker: &AxisBox, axis: usize) -> Vec<AxisBox> {
    let d = piece.dim();
    for i in 0..d {
        if i == axis {
            continue;
        }
        if blocker.hi().coord(i) <= piece.lo().coord(i)
            || blocker.lo().coord(i) >= piece.hi().coord(i)
        {
            return vec![piece];
        }
    }
    let mut out = Vec::new();
    let mut cur = piece;
    for i in 0..d {
        if i == axis {
            continue;
        }
        if blocker.lo().coord(i) > cur.lo().coord(i) {
            let mut hi = cur.hi().clone();
            hi.set_coord(i, blocker.lo().coord(i));
            push_nonempty(&mut out, AxisBox::new(cur.lo().clone(), hi), axis);
            let mut lo = cur.lo().clone();
            lo.set_coord(i, blocker.lo().coord(i));
            cur = AxisBox::new(lo, cur.hi().clone());
        }
        if blocker.hi().coord(i) < cur.hi().coord(i) {
            let mut lo = cur.lo().clone();
            lo.set_coord(i, blocker.hi().coord(i));
            push_nonempty(&mut out, AxisBox::new(lo, cur.hi().clone()), axis);
            let mut hi = cur.hi().clone();
            hi.set_coord(i, blocker.hi().coord(i));
            cur = AxisBox::new(cur.lo().clone(), hi);
        }
    }
    // what remains of cur is inside the blocker and is dropped
    out
}

fn push_nonempty(out: &mut Vec<AxisBox>, b: AxisBox, axis: usize) {
    for i in 0..b.dim() {
        if i != axis && !(b.hi().coord(i) - b.lo().coord(i) > 0.0) {
            return;
        }
    }
    out.push(b);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn area(faces: &[Face]) -> f64 {
        faces.iter().map(|f| f.area()).sum()
    }

    #[test]
    fn single_box_keeps_all_six_faces() {
        let b = AxisBox::new(Point::new(&[0.0, 0.0, 0.0]), Point::new(&[1.0, 2.0, 3.0]));
        let faces = extract_faces(&[b]);
        assert_eq!(faces.len(), 6);
        let expect = 2.0 * (1.0 * 2.0 + 2.0 * 3.0 + 1.0 * 3.0);
        assert!((area(&faces) - expect).abs() < 1e-12, "surface area of a box");
    }

    #[test]
    fn abutting_boxes_drop_the_shared_face() {
        let a = AxisBox::new(Point::new(&[0.0, 0.0, 0.0]), Point::new(&[1.0, 1.0, 1.0]));
        let b = AxisBox::new(Point::new(&[1.0, 0.0, 0.0]), Point::new(&[2.0, 1.0, 1.0]));
        let faces = extract_faces(&[a, b]);
        assert_eq!(faces.len(), 10, "two cubes sharing a face expose 10 faces");
        assert!((area(&faces) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn partial_overlap_clips_to_the_visible_part() {
        let a = AxisBox::new(Point::new(&[0.0, 0.0, 0.0]), Point::new(&[1.0, 1.0, 1.0]));
        let b = AxisBox::new(Point::new(&[1.0, 0.0, 0.0]), Point::new(&[2.0, 0.5, 1.0]));
        let faces = extract_faces(&[a, b]);
        // a's +x face keeps the strip not covered by b
        let strip: f64 = faces
            .iter()
            .filter(|f| f.axis == 0 && f.outward > 0.0 && f.offset() == 1.0)
            .map(|f| f.area())
            .sum();
        assert!((strip - 0.5).abs() < 1e-12, "visible strip area is 1/2, got {strip}");
    }

    #[test]
    fn overlapping_boxes_have_no_interior_faces() {
        let a = AxisBox::new(Point::new(&[0.0, 0.0, 0.0]), Point::new(&[1.2, 1.0, 1.0]));
        let b = AxisBox::new(Point::new(&[0.8, 0.0, 0.0]), Point::new(&[2.0, 1.0, 1.0]));
        let faces = extract_faces(&[a, b]);
        for f in &faces {
            if f.axis == 0 {
                let v = f.offset();
                assert!(
                    v == 0.0 || v == 2.0,
                    "x-normal faces only at the outer planes, found one at {v}"
                );
            }
        }
        let total = area(&faces);
        let expect = 2.0 * (1.0 + 2.0 + 2.0);
        assert!((total - expect).abs() < 1e-12, "union is a 2x1x1 brick");
    }
}
