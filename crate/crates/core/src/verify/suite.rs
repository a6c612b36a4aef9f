//! The full verification pass over a constructed run.

use num_complex::Complex64;

use crate::construction::Stage;
use crate::error::Result;
use crate::geometry::{C2Point, GridSpec, PointCloud};

use super::diagnostics::{eta_coverage, projection_thinness_profile, spectrum_gap};
use super::facts::{check_certificate_c, check_nesting, check_v_in_m};
use super::fit::fit_certificate_poly;
use super::hull::{hull_search, MARGIN_FLOOR};
use super::max_modulus::{battery, check_max_modulus_battery, MAX_MODULUS_TOL};
use super::report::{min_check, CheckRecord, VerificationReport};

pub const ORIGIN_TOL: f64 = 1e-9;
pub const LEVEL_ZERO_TOL: f64 = 1e-6;
pub const PREVIOUS_BOUND: f64 = 0.25;
pub const ETA_S_VALUES: [f64; 4] = [0.25, 0.5, 0.75, 1.0];
pub const ETA_DELTA: f64 = 0.05;

/// Parameters of the suite that are not carried by the stages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteSettings {
    /// Grid of the fit nodes.
    pub grid: GridSpec,
    pub degree_cap: u32,
    pub denom_cap: i64,
    pub seed: u64,
    pub hull_degree: u32,
    pub hull_budget: usize,
}

/// `0`, and eight points on each of the circles of radius 1/2 and 1.
pub fn eta_ratio_samples() -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0)];
    for r in [0.5, 1.0] {
        out.extend((0..8).map(|k| Complex64::from_polar(r, k as f64 * std::f64::consts::TAU / 8.0)));
    }
    out
}

/// `F_j(0,0) = 1`, `F_j = 0` on the level set, and `|F_j| < 1/4` on the
/// previous L-witnesses together with the level set.
pub fn check_stage_invariants(stages: &[Stage]) -> VerificationReport {
    let mut rep = VerificationReport::default();
    for (i, s) in stages.iter().enumerate() {
        let origin = s.function.eval(&C2Point::ORIGIN).map(|v| (v - 1.0).norm()).unwrap_or(f64::INFINITY);
        rep.push(
            CheckRecord::new("origin_value", Some(s.index), ORIGIN_TOL - origin, 0.0)
                .with_values(vec![origin])
                .with_witnesses(vec![C2Point::ORIGIN]),
        );
        rep.push(min_check(
            "level_set_zero",
            Some(s.index),
            s.k_cloud.iter(),
            |p| Some(LEVEL_ZERO_TOL - s.function.log_magnitude(p)?.exp()),
            0.0,
        ));
        if i > 0 {
            let prev = &stages[i - 1];
            rep.push(
                min_check(
                    "previous_bound",
                    Some(s.index),
                    prev.l_witnesses.iter().chain(s.k_cloud.iter()),
                    |p| Some(PREVIOUS_BOUND - s.function.log_magnitude(p)?.exp()),
                    0.0,
                )
                .strict(),
            );
        }
    }
    rep
}

/// Runs every check. `varieties[j]` samples `{F_j = 1}`; `(v, y)` is the
/// limit cloud and its boundary part.
pub fn run_suite(
    stages: &[Stage],
    varieties: &[PointCloud],
    v: &PointCloud,
    y: &PointCloud,
    settings: &SuiteSettings,
) -> Result<VerificationReport> {
    let mut rep = check_stage_invariants(stages);
    rep.extend(check_nesting(stages));
    rep.extend(check_v_in_m(stages, varieties));
    for s in stages {
        rep.extend(check_certificate_c(s, &s.m_witnesses, &s.k_cloud));
    }
    rep.extend(spectrum_gap(stages, v)?);
    let polys = battery(settings.degree_cap, settings.denom_cap, settings.seed);
    rep.extend(check_max_modulus_battery(&polys, v, y, MAX_MODULUS_TOL));

    for s in stages {
        let rec = match fit_certificate_poly(&s.function, settings.degree_cap, &settings.grid, &s.k_cloud, &s.m_witnesses) {
            Ok(fit) => CheckRecord::new("fit_certificate", Some(s.index), fit.margin, 0.0)
                .with_values(vec![fit.max_fit_error, fit.condition])
                .with_note(format!("degree {}", fit.degree)),
            Err(e) => CheckRecord::new("fit_certificate", Some(s.index), f64::NEG_INFINITY, 0.0).with_note(e.to_string()),
        };
        rep.push(rec.diagnostic());
    }
    if !y.is_empty() {
        let h = hull_search(&C2Point::ORIGIN, y, settings.hull_degree, settings.hull_budget, settings.seed)?;
        rep.push(
            CheckRecord::new("origin_in_hull_of_y", None, -h.best.margin, MARGIN_FLOOR)
                .diagnostic()
                .with_values(vec![h.best.value_at_target, h.best.sup_on_cloud, h.evaluations as f64])
                .with_note(h.best.describe()),
        );
    }
    rep.extend(projection_thinness_profile(v));
    rep.push(eta_coverage(v, &ETA_S_VALUES, &eta_ratio_samples(), ETA_DELTA)?);
    Ok(rep)
}
