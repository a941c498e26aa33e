//! Surface-measure queries and the ADR verifier.

use crate::ball::SurfaceBall;
use crate::boundary::BoundaryModel;
use crate::error::GeomError;
use crate::par::{map_indexed, ExecMode};
use crate::point::Point;
use crate::Result;
use serde::{Deserialize, Serialize};

/// σ(Δ) = H^n(E ∩ B(center, r)).
pub fn sigma_of_ball(e: &BoundaryModel, delta: &SurfaceBall) -> Result<f64> {
    e.sigma_ball(delta)
}

/// (δ(X), x̂) with x̂ a nearest boundary point.
pub fn distance_to_boundary(e: &BoundaryModel, x: &Point) -> (f64, Point) {
    e.nearest(x)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AdrViolation {
    pub center: Point,
    pub r: f64,
    pub ratio: f64,
}

/// Result of scanning σ(Δ(x,r)) / r^n over a test matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AdrReport {
    pub pairs_tested: usize,
    pub worst_lower_ratio: f64,
    pub worst_upper_ratio: f64,
    /// C = max(worst upper, 1 / worst lower); >= 1 whenever ratios are sane.
    pub constant: f64,
    /// Pairs whose ratio degenerated (zero or non-finite).
    pub violations: Vec<AdrViolation>,
}

/// Evaluates the regularity ratios σ(Δ(x,r))/r^n on the given matrix of
/// centers and radii (full cross product).
pub fn adr_check(
    e: &BoundaryModel,
    centers: &[Point],
    radii: &[f64],
    mode: ExecMode,
) -> Result<AdrReport> {
    if centers.is_empty() || radii.is_empty() {
        return Err(GeomError::EmptyInput("adr check needs centers and radii"));
    }
    let max_r = e.diameter().unwrap_or(f64::INFINITY);
    for &r in radii {
        if !(r > 0.0 && r <= max_r) {
            return Err(GeomError::RadiusRange { r, max: max_r });
        }
    }
    let n = e.n() as i32;
    let pairs: Vec<(usize, usize)> = (0..centers.len())
        .flat_map(|ci| (0..radii.len()).map(move |ri| (ci, ri)))
        .collect();
    let ratios: Vec<Result<(f64, usize, usize)>> = map_indexed(mode, pairs.len(), |i| {
        let (ci, ri) = pairs[i];
        let delta = e.surface_ball(centers[ci].clone(), radii[ri])?;
        let sigma = e.sigma_ball(&delta)?;
        Ok((sigma / radii[ri].powi(n), ci, ri))
    });
    let mut worst_lower = f64::INFINITY;
    let mut worst_upper = 0.0f64;
    let mut violations = Vec::new();
    for item in ratios {
        let (ratio, ci, ri) = item?;
        if !(ratio.is_finite() && ratio > 0.0) {
            violations.push(AdrViolation {
                center: centers[ci].clone(),
                r: radii[ri],
                ratio,
            });
            continue;
        }
        worst_lower = worst_lower.min(ratio);
        worst_upper = worst_upper.max(ratio);
    }
    let constant = if violations.is_empty() && worst_lower.is_finite() {
        worst_upper.max(1.0 / worst_lower)
    } else {
        f64::INFINITY
    };
    Ok(AdrReport {
        pairs_tested: pairs.len(),
        worst_lower_ratio: worst_lower,
        worst_upper_ratio: worst_upper,
        constant,
        violations,
    })
}
