//! Ambient balls and boundary surface balls.

use crate::point::Point;
use serde::{Deserialize, Serialize};

/// Open ambient ball `B(center, r)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub r: f64,
}

impl Ball {
    pub fn new(center: Point, r: f64) -> Self {
        assert!(r > 0.0 && r.is_finite(), "ball radius must be positive");
        Ball { center, r }
    }

    #[inline]
    pub fn contains(&self, p: &Point) -> bool {
        self.center.dist_sq(p) < self.r * self.r
    }

    #[inline]
    pub fn closed_contains(&self, p: &Point) -> bool {
        self.center.dist_sq(p) <= self.r * self.r
    }

    pub fn dilate(&self, factor: f64) -> Ball {
        Ball::new(self.center.clone(), self.r * factor)
    }

    /// Whether `B(self) ⊂ B(other)` (closed inclusion).
    pub fn inside(&self, other: &Ball) -> bool {
        self.center.dist(&other.center) + self.r <= other.r
    }
}

/// Surface ball Δ(x, r) = B(x, r) ∩ E for a boundary model identified by tag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceBall {
    pub center: Point,
    pub r: f64,
    /// Tag of the owning boundary model; guards against cross-model misuse.
    pub model_tag: u64,
}

impl SurfaceBall {
    pub fn ball(&self) -> Ball {
        Ball::new(self.center.clone(), self.r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn open_ball_excludes_rim() {
        let b = Ball::new(Point::zeros(3), 1.0);
        assert!(b.contains(&Point::new(&[0.5, 0.0, 0.0])));
        assert!(!b.contains(&Point::new(&[1.0, 0.0, 0.0])));
        assert!(b.closed_contains(&Point::new(&[1.0, 0.0, 0.0])));
    }

    #[test]
    fn inclusion_accounts_for_offset() {
        let small = Ball::new(Point::new(&[0.5, 0.0]), 0.4);
        let big = Ball::new(Point::zeros(2), 1.0);
        assert!(small.inside(&big));
        assert!(!big.inside(&small));
        let edge = Ball::new(Point::new(&[0.7, 0.0]), 0.4);
        assert!(!edge.inside(&big));
    }

    #[test]
    #[should_panic(expected = "radius")]
    fn zero_radius_rejected() {
        let _ = Ball::new(Point::zeros(2), 0.0);
    }
}
