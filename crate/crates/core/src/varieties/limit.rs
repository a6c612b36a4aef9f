use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{boundary_distance, select_cauchy_subsequence, CloudTag, PointCloud};

use super::sample::VarietySample;

/// The last cloud of a Cauchy-like subsequence of variety samples, and its
/// points near the boundary of the bidisk.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitSet {
    pub v: PointCloud,
    pub y: PointCloud,
    pub chosen_indices: Vec<usize>,
    pub gap_diagnostics: Vec<f64>,
    pub best_effort: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSummary {
    pub chosen_indices: Vec<usize>,
    pub gap_diagnostics: Vec<f64>,
    pub best_effort: bool,
    pub v_points: usize,
    pub y_points: usize,
}

impl LimitSet {
    pub fn summary(&self) -> LimitSummary {
        LimitSummary {
            chosen_indices: self.chosen_indices.clone(),
            gap_diagnostics: self.gap_diagnostics.clone(),
            best_effort: self.best_effort,
            v_points: self.v.len(),
            y_points: self.y.len(),
        }
    }
}

/// Greedy Cauchy selection over the sample clouds. A single sample is its
/// own limit. `Y` collects the points of `V` with `max(|z|, |w|) >= 1 - delta_bd`.
pub fn limit_set(samples: &[VarietySample], target_gap: f64, delta_bd: f64) -> Result<LimitSet> {
    let (chosen_indices, gap_diagnostics, best_effort) = match samples.len() {
        0 => return Err(Error::InvalidParameter("no variety samples".into())),
        1 => (vec![0], Vec::new(), false),
        _ => {
            let clouds: Vec<PointCloud> = samples.iter().map(|s| s.cloud.clone()).collect();
            let sel = select_cauchy_subsequence(&clouds, target_gap)?;
            (sel.indices, sel.gaps, sel.best_effort)
        }
    };
    let last = &samples[*chosen_indices.last().expect("non-empty selection")].cloud;
    let v = last.retagged(CloudTag::V, last.stage());
    let y = v.filtered(CloudTag::Y, |p| p.radius() >= 1.0 - delta_bd);
    if y.is_empty() {
        return Err(Error::EmptyBoundary(format!(
            "no point of the limit cloud (stage {:?}, reach {:.6}) lies within {delta_bd} of the boundary",
            v.stage(),
            v.reach()
        )));
    }
    Ok(LimitSet {
        v,
        y,
        chosen_indices,
        gap_diagnostics,
        best_effort,
    })
}

/// Points of `v` within `delta_bd` of the boundary of `{|z| <= r, |w| <= s}`.
pub fn restrict_to_shell(v: &PointCloud, r: f64, s: f64, delta_bd: f64) -> Result<PointCloud> {
    if !(r > 0.0 && r <= 1.0 && s > 0.0 && s <= 1.0) {
        return Err(Error::InvalidParameter(format!("shell radii must lie in (0, 1], got r={r}, s={s}")));
    }
    Ok(v.filtered(CloudTag::Y, |p| boundary_distance(p, r, s) <= delta_bd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::C2Point;
    use num_complex::Complex64;

    fn line_sample(ts: &[f64]) -> VarietySample {
        let pts: Vec<C2Point> = ts.iter().map(|&t| C2Point::real(t, -t)).collect();
        let cloud = PointCloud::new(pts, CloudTag::V, Some(1), 1e-12).unwrap();
        VarietySample {
            boundary_reach: cloud.reach(),
            cloud,
            residual: 0.0,
            center_only: false,
            reach_stalled: false,
        }
    }

    #[test]
    fn constant_sequence() {
        let s = line_sample(&[0.0, 0.5, -0.9995, 1.0, -1.0]);
        let lim = limit_set(&[s.clone(), s.clone(), s.clone()], 1e-6, 1e-3).unwrap();
        assert_eq!(lim.v.points(), s.cloud.points());
        assert_eq!(lim.chosen_indices, [0, 1, 2]);
        assert_eq!(lim.gap_diagnostics, [0.0, 0.0]);
        assert_eq!(lim.y.len(), 3);
        assert!(lim.y.iter().all(|p| p.radius() >= 0.999));
    }

    #[test]
    fn empty_boundary_is_an_error() {
        let s = line_sample(&[0.0, 0.5]);
        assert!(matches!(limit_set(&[s], 1e-6, 1e-3), Err(Error::EmptyBoundary(_))));
    }

    #[test]
    fn shells() {
        let ts: Vec<f64> = (-20..=20).map(|k| k as f64 / 20.0).collect();
        let s = line_sample(&ts);
        let full = restrict_to_shell(&s.cloud, 1.0, 1.0, 1e-3).unwrap();
        assert_eq!(full.len(), 2);
        let half = restrict_to_shell(&s.cloud, 1.0, 0.5, 1e-3).unwrap();
        assert!(half.iter().all(|p| (p.w.norm() - 0.5).abs() <= 1e-3));
        assert_eq!(half.len(), 2);
        let generic = PointCloud::new(
            vec![C2Point::new(Complex64::new(0.3, 0.71), Complex64::new(-0.2, 0.1))],
            CloudTag::V,
            None,
            1e-12,
        )
        .unwrap();
        assert!(restrict_to_shell(&generic, 1.0, 1.0, 0.0).unwrap().is_empty());
    }
}
