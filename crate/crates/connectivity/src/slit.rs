//! Negative control for chain bounds: the complement of a segment.
//! Points just above and just below the slit are close in distance but
//! every chain between them must walk around a tip, so the ball count
//! blows up as the approach distance shrinks.

use geom::Point;

use crate::chain::Clearance;

/// The open set R^d minus a closed segment from `a` to `b`.
#[derive(Clone, Debug)]
pub struct SlitPlane {
    pub a: Point,
    pub b: Point,
}

impl SlitPlane {
    pub fn new(a: Point, b: Point) -> Self {
        assert_eq!(a.dim(), b.dim(), "slit endpoints must share a dimension");
        SlitPlane { a, b }
    }

    /// Closest parameter of the segment to `p`, in [0, 1].
    fn foot(&self, p: &Point) -> f64 {
        let mut vv = 0.0;
        let mut pv = 0.0;
        for i in 0..self.a.dim() {
            let v = self.b.coord(i) - self.a.coord(i);
            vv += v * v;
            pv += (p.coord(i) - self.a.coord(i)) * v;
        }
        if vv == 0.0 {
            return 0.0;
        }
        (pv / vv).clamp(0.0, 1.0)
    }
}

impl Clearance for SlitPlane {
    fn clearance(&self, p: &Point) -> f64 {
        let t = self.foot(p);
        p.dist(&self.a.lerp(&self.b, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_slit() -> SlitPlane {
        SlitPlane::new(Point::new(&[-1.0, 0.0]), Point::new(&[1.0, 0.0]))
    }

    #[test]
    fn clearance_is_vertical_over_the_slit_and_radial_past_the_tip() {
        let slit = unit_slit();
        let over = Point::new(&[0.25, 0.125]);
        assert!((slit.clearance(&over) - 0.125).abs() < 1e-15);
        let past = Point::new(&[1.0 + 0.3, 0.4]);
        assert!(
            (slit.clearance(&past) - 0.5).abs() < 1e-15,
            "past the tip the distance is to the endpoint"
        );
        let on = Point::new(&[-0.5, 0.0]);
        assert_eq!(slit.clearance(&on), 0.0, "points on the slit have no clearance");
    }
}
