//! Per-scale access diagnostics: achieved corkscrew fractions over a
//! ladder of surface balls, and chain lengths between probe pairs at a
//! few separation multipliers.

use geom::{BoundaryModel, Point};
use serde::Serialize;
use whitney::{Side, WhitneyDecomposition};

use crate::chain::harnack_chain;
use crate::corkscrew::{corkscrew, Candidates, CorkscrewConfig};
use crate::error::Result;

#[derive(Clone, Debug, Serialize)]
pub struct ChainCell {
    /// Requested separation multiplier.
    pub lambda: f64,
    /// Realized |X - X'| / rho for the probe pair actually used.
    pub lambda_realized: f64,
    /// Balls in the chain.
    pub n: usize,
    pub ratio_constant: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagRow {
    pub scale: f64,
    /// Achieved corkscrew fraction at this scale.
    pub c: f64,
    /// Clearance of the corkscrew point.
    pub clearance: f64,
    pub chains: Vec<ChainCell>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NtaReport {
    pub rows: Vec<DiagRow>,
    pub c_min: f64,
}

impl NtaReport {
    /// Smallest corkscrew fraction over the scale ladder.
    pub fn worst_c(&self) -> f64 {
        self.rows.iter().fold(f64::INFINITY, |m, r| m.min(r.c))
    }
}

/// Run the ladder anchored at boundary point `x0`. Partner probes for
/// the chain cells sit toward `tangent`; chains are skipped when no
/// decomposition is supplied (derived domains carry none).
#[allow(clippy::too_many_arguments)]
pub fn nta_diagnostics(
    model: &BoundaryModel,
    cands: &Candidates,
    chain_decomp: Option<&WhitneyDecomposition>,
    x0: &Point,
    tangent: &Point,
    scales: &[f64],
    lambdas: &[f64],
    cfg: &CorkscrewConfig,
) -> Result<NtaReport> {
    let mut rows = Vec::with_capacity(scales.len());
    for &r in scales {
        let delta = model.surface_ball(x0.clone(), r)?;
        let here = corkscrew(model, &delta, Side::Interior, cands, None, cfg)?;
        let clearance = model.distance(&here.point);
        let mut chains = Vec::new();
        if let Some(decomp) = chain_decomp {
            for &lambda in lambdas {
                let offset: Vec<f64> = (0..x0.dim())
                    .map(|i| x0.coord(i) + lambda * clearance * tangent.coord(i))
                    .collect();
                let (_, anchor) = model.nearest(&Point::new(&offset));
                let partner_delta = model.surface_ball(anchor, r)?;
                let there =
                    corkscrew(model, &partner_delta, Side::Interior, cands, None, cfg)?;
                let rho = clearance.min(model.distance(&there.point));
                let gap = here.point.dist(&there.point);
                let lambda_realized = gap / rho;
                let chain = harnack_chain(
                    model,
                    decomp,
                    &here.point,
                    &there.point,
                    rho,
                    lambda_realized.max(lambda),
                )?;
                chains.push(ChainCell {
                    lambda,
                    lambda_realized,
                    n: chain.len(),
                    ratio_constant: chain.ratio_constant,
                });
            }
        }
        rows.push(DiagRow {
            scale: r,
            c: here.c,
            clearance,
            chains,
        });
    }
    Ok(NtaReport {
        rows,
        c_min: cfg.c_min,
    })
}
