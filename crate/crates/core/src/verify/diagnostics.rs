//! Spectrum gaps, projection occupancy and shell coverage of a sampled
//! limit set.

use std::collections::HashSet;

use num_complex::Complex64;

use crate::construction::Stage;
use crate::error::{Error, Result};
use crate::geometry::PointCloud;
use crate::varieties::restrict_to_shell;

use super::report::{min_check, CheckRecord, VerificationReport};

/// Cell sizes of the default occupancy profile.
pub const THINNESS_CELLS: [f64; 3] = [0.1, 0.05, 0.025];

/// For each stage, `min |p_j - a_j|` over `v`; strictly positive margins
/// pass.
pub fn spectrum_gap(stages: &[Stage], v: &PointCloud) -> Result<VerificationReport> {
    if v.is_empty() {
        return Err(Error::EmptyCloud("spectrum gap cloud"));
    }
    let mut rep = VerificationReport::default();
    for s in stages {
        let p = s.poly.as_complex();
        rep.push(min_check("spectrum_gap", Some(s.index), v.iter(), |x| Some((p.eval(x) - s.a).norm()), 0.0).strict());
    }
    Ok(rep)
}

/// Number of cells of side `cell`, aligned at `-1 - i`, met by `pts`.
pub fn occupied_cells(pts: impl Iterator<Item = Complex64>, cell: f64) -> usize {
    pts.map(|c| (((c.re + 1.0) / cell).floor() as i64, ((c.im + 1.0) / cell).floor() as i64))
        .collect::<HashSet<_>>()
        .len()
}

/// Occupied area fraction of the unit disk by the two coordinate
/// projections of `x`, at cell size `cell`: `occupied * cell^2 / pi`.
pub fn projection_occupancy(x: &PointCloud, cell: f64) -> Result<(f64, f64)> {
    if !(cell > 0.0 && cell.is_finite()) {
        return Err(Error::InvalidParameter(format!("cell size must be positive, got {cell}")));
    }
    let area = cell * cell / std::f64::consts::PI;
    Ok((
        occupied_cells(x.iter().map(|p| p.z), cell) as f64 * area,
        occupied_cells(x.iter().map(|p| p.w), cell) as f64 * area,
    ))
}

/// Diagnostic record with values `[fraction_z, fraction_w]`; the margin is
/// `1 - max fraction`.
pub fn check_projection_thinness(x: &PointCloud, cell: f64) -> Result<CheckRecord> {
    let (a, b) = projection_occupancy(x, cell)?;
    Ok(CheckRecord::new("projection_thinness", x.stage(), 1.0 - a.max(b), 0.0)
        .diagnostic()
        .with_values(vec![a, b])
        .with_note(format!("cell {cell}")))
}

/// [`check_projection_thinness`] at each of [`THINNESS_CELLS`].
pub fn projection_thinness_profile(x: &PointCloud) -> VerificationReport {
    VerificationReport {
        records: THINNESS_CELLS
            .iter()
            .map(|&c| check_projection_thinness(x, c).expect("positive cell"))
            .collect(),
    }
}

/// Fraction of pairs `(s, a)` for which the shell part of `v` at radii
/// `(1, s)` has a point with `|z - a w| <= delta |w|` and `||w| - s| <= delta`.
/// A diagnostic; values hold one `0/1` entry per pair in row-major order.
pub fn eta_coverage(v: &PointCloud, s_values: &[f64], a_samples: &[Complex64], delta: f64) -> Result<CheckRecord> {
    if s_values.iter().any(|s| !(0.25..=1.0).contains(s)) {
        return Err(Error::InvalidParameter("shell radii must lie in [1/4, 1]".into()));
    }
    if a_samples.iter().any(|a| !(a.norm() <= 1.0)) {
        return Err(Error::InvalidParameter("ratio samples must lie in the closed unit disk".into()));
    }
    let mut hits = Vec::with_capacity(s_values.len() * a_samples.len());
    let mut empty_shells = 0usize;
    for &s in s_values {
        let shell = restrict_to_shell(v, 1.0, s, delta)?;
        if shell.is_empty() {
            empty_shells += 1;
        }
        for &a in a_samples {
            let hit = shell
                .iter()
                .any(|p| (p.z - a * p.w).norm() <= delta * p.w.norm() && (p.w.norm() - s).abs() <= delta);
            hits.push(if hit { 1.0 } else { 0.0 });
        }
    }
    let fraction = if hits.is_empty() { 0.0 } else { hits.iter().sum::<f64>() / hits.len() as f64 };
    let mut rec = CheckRecord::new("eta_coverage", v.stage(), fraction, 0.0)
        .diagnostic()
        .with_values(hits);
    rec.pass = fraction > 0.0;
    if empty_shells > 0 {
        rec = rec.with_note(format!("{empty_shells} empty shell(s)"));
    }
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{C2Point, CloudTag};

    fn line(n_r: usize, n_a: usize) -> PointCloud {
        let mut pts = Vec::new();
        for r in 0..=n_r {
            for k in 0..n_a {
                let t = Complex64::from_polar(r as f64 / n_r as f64, k as f64 * std::f64::consts::TAU / n_a as f64);
                pts.push(C2Point::new(t, -t));
            }
        }
        PointCloud::new(pts, CloudTag::V, Some(1), 1e-12).unwrap()
    }

    #[test]
    fn occupancy_is_monotone_and_counted() {
        let v = line(40, 256);
        let mut prev = f64::INFINITY;
        for c in THINNESS_CELLS {
            let (a, b) = projection_occupancy(&v, c).unwrap();
            assert_eq!(a, b);
            assert!(a <= prev);
            prev = a;
        }
        assert!(projection_occupancy(&v, 0.1).unwrap().0 > 0.8);
        let ten = PointCloud::new(
            (0..10).map(|k| C2Point::real(k as f64 / 10.0 - 0.45, 0.0)).collect(),
            CloudTag::V,
            None,
            1e-12,
        )
        .unwrap();
        assert!(occupied_cells(ten.iter().map(|p| p.z), 0.1) <= 10);
        assert!(projection_occupancy(&v, 0.0).is_err());
    }

    #[test]
    fn eta_on_the_line() {
        let v = line(4, 16);
        let hit = eta_coverage(&v, &[0.5], &[Complex64::new(-1.0, 0.0)], 0.0).unwrap();
        assert_eq!(hit.margin, 1.0);
        let miss = eta_coverage(&v, &[0.5], &[Complex64::new(1.0, 0.0)], 1e-3).unwrap();
        assert_eq!(miss.margin, 0.0);
        assert!(!miss.pass && !miss.gate);
        let origin_only = PointCloud::new(vec![C2Point::ORIGIN], CloudTag::V, None, 1e-12).unwrap();
        let empty = eta_coverage(&origin_only, &[0.5], &[Complex64::new(0.0, 0.0)], 1e-3).unwrap();
        assert_eq!(empty.margin, 0.0);
        assert!(empty.note.is_some());
    }
}
