//! The three per-stage facts of the construction, checked on samples:
//! the regions `{Re F_j <= 1/2}` grow, every variety `{F_j = 1}` stays in
//! the earlier regions `{Re F_i >= 1/2}`, and `exp(-F_j)` separates the
//! level set from those regions.

use crate::construction::{label_for, Stage, REGION_TOL};
use crate::geometry::PointCloud;

use super::report::{min_check, CheckRecord, VerificationReport};

/// Tolerance of the variety-in-region check.
pub const V_IN_M_TOL: f64 = 1e-6;
/// Tolerance on `sup |exp(-F_j)| <= e^{-1/2}` over M-witnesses.
pub const SEPARATION_TOL: f64 = 1e-9;
/// Tolerance on `|exp(-F_j)| >= 1` over the level set.
pub const LEVEL_TOL: f64 = 1e-6;

/// For each `j`: `Re F_{j+1} < 1/2` on the L-witnesses of stage `j`, and
/// every level-set sample of stage `j` is classified L under `F_j`.
pub fn check_nesting(stages: &[Stage]) -> VerificationReport {
    let mut rep = VerificationReport::default();
    for s in stages {
        rep.push(min_check(
            "level_set_in_l",
            Some(s.index),
            s.k_cloud.iter(),
            |p| s.function.re(p).map(|re| 0.5 - re),
            0.0,
        ));
    }
    if stages.len() < 2 {
        rep.push(
            CheckRecord::new("nesting", stages.first().map(|s| s.index), f64::INFINITY, 0.0)
                .strict()
                .with_note("vacuous: single stage"),
        );
    }
    for pair in stages.windows(2) {
        let (cur, next) = (&pair[0], &pair[1]);
        rep.push(
            min_check(
                "nesting",
                Some(cur.index),
                cur.l_witnesses.iter(),
                |p| next.function.re(p).map(|re| 0.5 - re),
                0.0,
            )
            .strict(),
        );
    }
    rep
}

/// `min (Re F_i - 1/2)` over pairs `i <= j` and samples of `V_j`, one record
/// per `j`; also checks that no sample of `V_j` is classified L under
/// `F_{j-1}`.
pub fn check_v_in_m(stages: &[Stage], varieties: &[PointCloud]) -> VerificationReport {
    let mut rep = VerificationReport::default();
    for (j, (s, v)) in stages.iter().zip(varieties).enumerate() {
        let earlier = &stages[..=j];
        rep.push(min_check(
            "variety_in_m",
            Some(s.index),
            v.iter(),
            |p| {
                earlier
                    .iter()
                    .map(|e| e.function.re(p).map(|re| re - 0.5))
                    .try_fold(f64::INFINITY, |m, x| x.map(|x| m.min(x)))
            },
            V_IN_M_TOL,
        ));
        if j > 0 {
            let prev = &stages[j - 1];
            rep.push(
                min_check(
                    "variety_avoids_previous_l",
                    Some(s.index),
                    v.iter(),
                    |p| {
                        let label = label_for(prev.function.re(p), REGION_TOL);
                        prev.function
                            .re(p)
                            .map(|re| if label.is_l() { -1.0 } else { re - 0.5 - REGION_TOL })
                    },
                    0.0,
                )
                .strict(),
            );
        }
    }
    rep
}

/// `e^{-1/2} - sup |exp(-F_j)|` over the M-witnesses, and
/// `min |exp(-F_j)| - 1` over the level set.
pub fn check_certificate_c(stage: &Stage, m_witnesses: &PointCloud, k_cloud: &PointCloud) -> VerificationReport {
    let mut rep = VerificationReport::default();
    let bound = (-0.5f64).exp();
    let f = &stage.function;
    rep.push(min_check(
        "separation_on_m",
        Some(stage.index),
        m_witnesses.iter(),
        |p| f.re(p).map(|re| bound - (-re).exp()),
        SEPARATION_TOL,
    ));
    rep.push(min_check(
        "separation_on_k",
        Some(stage.index),
        k_cloud.iter(),
        |p| f.re(p).map(|re| (-re).exp() - 1.0),
        LEVEL_TOL,
    ));
    rep
}
