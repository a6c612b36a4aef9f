use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construction::{polish_grid_level, StageFunction};
use crate::geometry::{C2Point, CloudTag, GridSpec, PointCloud, BIDISK_SLACK};

/// Reach below which a refined sample is flagged.
pub const REACH_TARGET: f64 = 0.999;

/// Samples of `{F = 1}` in the closed bidisk.
#[derive(Debug, Clone, PartialEq)]
pub struct VarietySample {
    pub cloud: PointCloud,
    /// `max |F - 1|` over the points.
    pub residual: f64,
    /// `max max(|z|, |w|)` over the points.
    pub boundary_reach: f64,
    /// Only the origin was found.
    pub center_only: bool,
    /// Refinement ended below [`REACH_TARGET`].
    pub reach_stalled: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarietyDiagnostics {
    pub points: usize,
    pub residual: f64,
    pub boundary_reach: f64,
    pub center_only: bool,
    pub reach_stalled: bool,
}

impl VarietySample {
    /// Keeps the points of `candidates` with `|F - 1| <= tol` inside the
    /// bidisk; the origin is always present.
    pub(crate) fn assemble(f: &StageFunction, candidates: Vec<C2Point>, stage: Option<usize>, tol: f64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let checked: Vec<Option<(C2Point, f64)>> = candidates
            .par_iter()
            .map(|p| {
                let r = (f.eval_value(p).complex()? - one).norm();
                (r <= tol && p.in_bidisk(BIDISK_SLACK)).then_some((*p, r))
            })
            .collect();
        let mut pts: Vec<C2Point> = Vec::with_capacity(checked.len() + 1);
        let mut residual: f64 = 0.0;
        let mut has_origin = false;
        for (p, r) in checked.into_iter().flatten() {
            has_origin |= p == C2Point::ORIGIN;
            residual = residual.max(r);
            pts.push(p);
        }
        if !has_origin {
            pts.insert(0, C2Point::ORIGIN);
        }
        let center_only = pts.len() == 1;
        let cloud = PointCloud::new(pts, CloudTag::V, stage, BIDISK_SLACK).expect("checked points");
        let boundary_reach = cloud.reach();
        VarietySample {
            cloud,
            residual,
            boundary_reach,
            center_only,
            reach_stalled: boundary_reach < REACH_TARGET,
        }
    }

    pub fn diagnostics(&self) -> VarietyDiagnostics {
        VarietyDiagnostics {
            points: self.cloud.len(),
            residual: self.residual,
            boundary_reach: self.boundary_reach,
            center_only: self.center_only,
            reach_stalled: self.reach_stalled,
        }
    }
}

/// Grid filter on `|F - 1|`, Newton polish onto `F = 1`, deduplication at
/// half the radial grid step, and the origin.
pub fn sample_variety(f: &StageFunction, grid: &GridSpec, tol: f64, stage: Option<usize>) -> VarietySample {
    let pts = polish_grid_level(f, Complex64::new(1.0, 0.0), grid, tol)
        .into_iter()
        .map(|p| p.point)
        .collect();
    VarietySample::assemble(f, pts, stage, tol)
}
