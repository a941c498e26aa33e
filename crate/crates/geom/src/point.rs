//! Dimension-generic points backed by inline storage. Ambient dimension is a
//! runtime value (2 or 3 in practice), so coordinates live in a `SmallVec`
//! that never touches the heap for d <= 4.

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

type Coords = SmallVec<[f64; 4]>;

/// A point of the ambient space, also used as a displacement vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    coords: Coords,
}

impl Point {
    /// Nonempty, all coordinates finite; violations are programming errors.
    /// Dimension 1 is legal: chart coordinates of a curve boundary live on a
    /// line even though ambient models require d >= 2.
    pub fn new(coords: &[f64]) -> Self {
        assert!(!coords.is_empty(), "point needs at least one coordinate");
        assert!(
            coords.iter().all(|c| c.is_finite()),
            "point coordinates must be finite"
        );
        Point {
            coords: Coords::from_slice(coords),
        }
    }

    pub fn zeros(d: usize) -> Self {
        assert!(d >= 1);
        Point {
            coords: std::iter::repeat(0.0).take(d).collect(),
        }
    }

    /// Unit vector along coordinate axis `i`.
    pub fn axis_unit(d: usize, i: usize) -> Self {
        let mut p = Point::zeros(d);
        p.coords[i] = 1.0;
        p
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        self.coords[i]
    }

    #[inline]
    pub fn set_coord(&mut self, i: usize, v: f64) {
        debug_assert!(v.is_finite());
        self.coords[i] = v;
    }

    pub fn with_coord(&self, i: usize, v: f64) -> Point {
        let mut p = self.clone();
        p.set_coord(i, v);
        p
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    /// Drops coordinate `i`, e.g. to project onto a hyperplane chart.
    pub fn without_coord(&self, i: usize) -> SmallVec<[f64; 4]> {
        let mut out = SmallVec::new();
        for (j, &c) in self.coords.iter().enumerate() {
            if j != i {
                out.push(c);
            }
        }
        out
    }

    #[inline]
    pub fn dot(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum()
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    #[inline]
    pub fn dist_sq(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(other.coords.iter())
            .map(|(a, b)| {
                let d = a - b;
                d * d
            })
            .sum()
    }

    #[inline]
    pub fn dist(&self, other: &Point) -> f64 {
        self.dist_sq(other).sqrt()
    }

    pub fn scale(&self, s: f64) -> Point {
        Point {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    pub fn normalized(&self) -> Point {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero vector");
        self.scale(1.0 / n)
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        self.lerp(other, 0.5)
    }

    pub fn lerp(&self, other: &Point, t: f64) -> Point {
        Point {
            coords: self
                .coords
                .iter()
                .zip(other.coords.iter())
                .map(|(a, b)| a + t * (b - a))
                .collect(),
        }
    }

    /// Total order on coordinates, used for deterministic tie-breaking.
    pub fn lex_cmp(&self, other: &Point) -> Ordering {
        for (a, b) in self.coords.iter().zip(other.coords.iter()) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.dim().cmp(&other.dim())
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point {
            coords: self
                .coords
                .iter()
                .zip(rhs.coords.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        debug_assert_eq!(self.dim(), rhs.dim());
        Point {
            coords: self
                .coords
                .iter()
                .zip(rhs.coords.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul<f64> for &Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        self.scale(rhs)
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_round_trip() {
        let a = Point::new(&[1.0, 2.0, 3.0]);
        let b = Point::new(&[0.5, -1.0, 2.0]);
        let s = &a + &b;
        assert_eq!(s.as_slice(), &[1.5, 1.0, 5.0]);
        let d = &s - &b;
        assert_eq!(d, a);
        assert_eq!(a.dot(&b), 0.5 - 2.0 + 6.0);
    }

    #[test]
    fn lex_cmp_breaks_ties_coordinatewise() {
        let a = Point::new(&[1.0, 2.0]);
        let b = Point::new(&[1.0, 3.0]);
        assert_eq!(a.lex_cmp(&b), Ordering::Less);
        assert_eq!(b.lex_cmp(&a), Ordering::Greater);
        assert_eq!(a.lex_cmp(&a.clone()), Ordering::Equal);
    }

    #[test]
    #[should_panic(expected = "ambient dimension")]
    fn rejects_dimension_one() {
        let _ = Point::new(&[1.0]);
    }

    #[test]
    #[should_panic(expected = "finite")]
    fn rejects_nan() {
        let _ = Point::new(&[f64::NAN, 0.0]);
    }
}
