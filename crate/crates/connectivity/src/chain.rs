//! Harnack chains: short runs of interior balls joining two points, each
//! ball a fixed fraction of its boundary clearance so consecutive balls
//! overlap and the clearance-to-diameter ratio stays pinned.

use geom::{Ball, BoundaryModel, Point};
use serde::Serialize;
use whitney::WhitneyDecomposition;

use crate::error::{ConnectivityError, Result};
use crate::route::{astar_cubes, polyline_through};

/// Ball radius as a fraction of the boundary clearance at its center.
/// One step advances a full radius, so consecutive balls always overlap
/// and the chain over a segment of length L at clearance d uses about
/// L / (eta d) balls.
pub const CHAIN_STEP_ETA: f64 = 0.5;

/// Distance oracle a chain can be built and verified against.
pub trait Clearance: Sync {
    /// Distance from the point to the boundary set. Positive inside the
    /// open set the chain must not leave.
    fn clearance(&self, p: &Point) -> f64;
}

impl Clearance for BoundaryModel {
    fn clearance(&self, p: &Point) -> f64 {
        self.distance(p)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HarnackChain {
    pub x: Point,
    pub x_prime: Point,
    /// Clearance floor both endpoints were checked against.
    pub rho: f64,
    /// Separation multiplier |x - x'| <= lambda * rho.
    pub lambda: f64,
    pub balls: Vec<Ball>,
    /// Achieved comparability: max over balls of
    /// max(diam / gap, gap / diam) with gap the clearance behind the ball.
    pub ratio_constant: f64,
}

impl HarnackChain {
    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }
}

/// What an independent verification measured.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ChainReport {
    pub n: usize,
    pub ratio_constant: f64,
    pub min_radius: f64,
    pub max_radius: f64,
}

fn ratio_constant(oracle: &dyn Clearance, balls: &[Ball]) -> f64 {
    let mut worst: f64 = 1.0;
    for b in balls {
        let gap = oracle.clearance(&b.center) - b.r;
        let diam = 2.0 * b.r;
        worst = worst.max(diam / gap).max(gap / diam);
    }
    worst
}

/// Cover a polyline by clearance-proportional balls. Each ball sits on
/// the polyline, has radius `eta` times the local clearance, and the walk
/// advances one radius per step, so consecutive balls overlap. The first
/// ball is centered on the first point and the last on the last point.
pub fn chain_along(oracle: &dyn Clearance, polyline: &[Point], eta: f64) -> Result<Vec<Ball>> {
    if polyline.is_empty() {
        return Err(ConnectivityError::Invalid("empty polyline".into()));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(ConnectivityError::Invalid(format!(
            "step fraction {eta} outside (0, 1)"
        )));
    }
    let radius_at = |p: &Point| -> Result<f64> {
        let d = oracle.clearance(p);
        if d <= 0.0 {
            return Err(ConnectivityError::ChainPrecondition(format!(
                "polyline touches the boundary at {:?}",
                p
            )));
        }
        Ok(eta * d)
    };

    let mut balls = Vec::new();
    let mut cur = polyline[0].clone();
    let mut seg = 0usize; // index of the segment cur lies on
    let mut r = radius_at(&cur)?;
    balls.push(Ball::new(cur.clone(), r));

    loop {
        // Walk forward one radius along the remaining polyline.
        let mut budget = r;
        let mut advanced = false;
        while budget > 0.0 && seg + 1 < polyline.len() {
            let target = &polyline[seg + 1];
            let hop = cur.dist(target);
            if hop <= budget {
                budget -= hop;
                cur = target.clone();
                seg += 1;
                advanced = advanced || hop > 0.0;
            } else {
                let t = budget / hop;
                cur = cur.lerp(target, t);
                budget = 0.0;
                advanced = true;
            }
        }
        if seg + 1 >= polyline.len() {
            // Reached the end point; close with a ball centered there.
            let end = polyline.last().unwrap();
            let last = balls.last().unwrap();
            if last.center.dist(end) > 0.0 {
                let re = radius_at(end)?;
                balls.push(Ball::new(end.clone(), re));
            }
            return Ok(balls);
        }
        if !advanced {
            return Err(ConnectivityError::Invalid(
                "polyline walk stalled: repeated waypoint".into(),
            ));
        }
        r = radius_at(&cur)?;
        balls.push(Ball::new(cur.clone(), r));
    }
}

fn check_preconditions(
    oracle: &dyn Clearance,
    x: &Point,
    x_prime: &Point,
    rho: f64,
    lambda: f64,
) -> Result<()> {
    if rho <= 0.0 {
        return Err(ConnectivityError::ChainPrecondition(format!(
            "clearance floor rho = {rho} must be positive"
        )));
    }
    let slack = 1.0 + 1e-12;
    let dx = oracle.clearance(x);
    if dx * slack < rho {
        return Err(ConnectivityError::ChainPrecondition(format!(
            "clearance {dx:.6e} at the start is below rho = {rho:.6e}"
        )));
    }
    let dy = oracle.clearance(x_prime);
    if dy * slack < rho {
        return Err(ConnectivityError::ChainPrecondition(format!(
            "clearance {dy:.6e} at the end is below rho = {rho:.6e}"
        )));
    }
    let gap = x.dist(x_prime);
    if gap > lambda * rho * slack {
        return Err(ConnectivityError::ChainPrecondition(format!(
            "separation {gap:.6e} exceeds lambda * rho = {:.6e}",
            lambda * rho
        )));
    }
    Ok(())
}

fn assemble(
    oracle: &dyn Clearance,
    x: &Point,
    x_prime: &Point,
    rho: f64,
    lambda: f64,
    balls: Vec<Ball>,
) -> HarnackChain {
    let ratio = ratio_constant(oracle, &balls);
    HarnackChain {
        x: x.clone(),
        x_prime: x_prime.clone(),
        rho,
        lambda,
        balls,
        ratio_constant: ratio,
    }
}

/// Chain between two interior points, routed through the Whitney
/// face-adjacency graph so the corridor never leaves the decomposed side.
pub fn harnack_chain(
    model: &BoundaryModel,
    decomp: &WhitneyDecomposition,
    x: &Point,
    x_prime: &Point,
    rho: f64,
    lambda: f64,
) -> Result<HarnackChain> {
    check_preconditions(model, x, x_prime, rho, lambda)?;
    if x.dist(x_prime) == 0.0 {
        let r = CHAIN_STEP_ETA * model.distance(x);
        let balls = vec![Ball::new(x.clone(), r)];
        return Ok(assemble(model, x, x_prime, rho, lambda, balls));
    }
    let ia = decomp
        .locate(x)
        .ok_or_else(|| ConnectivityError::Uncovered(format!("{:?}", x)))?;
    let ib = decomp
        .locate(x_prime)
        .ok_or_else(|| ConnectivityError::Uncovered(format!("{:?}", x_prime)))?;
    let path = astar_cubes(decomp, ia, ib)?;
    let mut poly = Vec::with_capacity(path.len() * 2 + 2);
    poly.push(x.clone());
    poly.extend(polyline_through(decomp, &path));
    poly.push(x_prime.clone());
    let balls = chain_along(model, &poly, CHAIN_STEP_ETA)?;
    Ok(assemble(model, x, x_prime, rho, lambda, balls))
}

/// Chain along caller-supplied waypoints, for domains that carry no
/// decomposition. The first and last waypoints are the endpoints.
pub fn harnack_chain_via(
    oracle: &dyn Clearance,
    waypoints: &[Point],
    rho: f64,
    lambda: f64,
) -> Result<HarnackChain> {
    if waypoints.len() < 2 {
        return Err(ConnectivityError::Invalid(
            "need at least two waypoints".into(),
        ));
    }
    let x = waypoints.first().unwrap();
    let x_prime = waypoints.last().unwrap();
    check_preconditions(oracle, x, x_prime, rho, lambda)?;
    let balls = chain_along(oracle, waypoints, CHAIN_STEP_ETA)?;
    Ok(assemble(oracle, x, x_prime, rho, lambda, balls))
}

/// Independent check of a finished chain against the distance oracle.
/// Shares no state with the builders: every invariant is re-measured
/// from the stored balls.
pub fn verify_chain(oracle: &dyn Clearance, chain: &HarnackChain) -> Result<ChainReport> {
    let balls = &chain.balls;
    if balls.is_empty() {
        return Err(ConnectivityError::BadChain("chain has no balls".into()));
    }
    let first = balls.first().unwrap();
    if chain.x.dist(&first.center) >= first.r {
        return Err(ConnectivityError::BadChain(
            "start point is not inside the first ball".into(),
        ));
    }
    let last = balls.last().unwrap();
    if chain.x_prime.dist(&last.center) >= last.r {
        return Err(ConnectivityError::BadChain(
            "end point is not inside the last ball".into(),
        ));
    }
    let mut min_radius = f64::INFINITY;
    let mut max_radius: f64 = 0.0;
    for (i, b) in balls.iter().enumerate() {
        if !(b.r > 0.0) {
            return Err(ConnectivityError::BadChain(format!(
                "ball {i} has nonpositive radius"
            )));
        }
        let d = oracle.clearance(&b.center);
        if d <= b.r {
            return Err(ConnectivityError::BadChain(format!(
                "ball {i} pokes out: clearance {d:.6e} <= radius {:.6e}",
                b.r
            )));
        }
        min_radius = min_radius.min(b.r);
        max_radius = max_radius.max(b.r);
    }
    for (i, pair) in balls.windows(2).enumerate() {
        let gap = pair[0].center.dist(&pair[1].center);
        if gap >= pair[0].r + pair[1].r {
            return Err(ConnectivityError::BadChain(format!(
                "balls {i} and {} do not overlap",
                i + 1
            )));
        }
    }
    let ratio = ratio_constant(oracle, balls);
    if ratio > chain.ratio_constant * (1.0 + 1e-9) {
        return Err(ConnectivityError::BadChain(format!(
            "measured ratio constant {ratio:.6} exceeds the stored {:.6}",
            chain.ratio_constant
        )));
    }
    Ok(ChainReport {
        n: balls.len(),
        ratio_constant: ratio,
        min_radius,
        max_radius,
    })
}

/// Graph-routed chain source for Whitney region augmentation. Balls are
/// thin (whitney::CHAIN_ETA) to keep the met corridor one cube wide, but
/// the route bends with the domain instead of assuming star shape.
pub struct WhitneyChains<'a> {
    pub model: &'a BoundaryModel,
    pub decomp: &'a WhitneyDecomposition,
}

impl whitney::ChainSource for WhitneyChains<'_> {
    fn chain(&self, x: &Point, y: &Point) -> std::result::Result<Vec<Ball>, String> {
        if x.dist(y) == 0.0 {
            let r = whitney::CHAIN_ETA * self.model.distance(x);
            if r <= 0.0 {
                return Err("chain endpoint on the boundary".into());
            }
            return Ok(vec![Ball::new(x.clone(), r)]);
        }
        let ia = self
            .decomp
            .locate(x)
            .ok_or_else(|| format!("uncovered chain endpoint {:?}", x))?;
        let ib = self
            .decomp
            .locate(y)
            .ok_or_else(|| format!("uncovered chain endpoint {:?}", y))?;
        let path = astar_cubes(self.decomp, ia, ib).map_err(|e| e.to_string())?;
        let mut poly = Vec::with_capacity(path.len() * 2 + 2);
        poly.push(x.clone());
        poly.extend(polyline_through(self.decomp, &path));
        poly.push(y.clone());
        chain_along(self.model, &poly, whitney::CHAIN_ETA).map_err(|e| e.to_string())
    }
}
