use serde::{Deserialize, Serialize};

use crate::geometry::C2Point;

use super::stage_fn::StageFunction;

/// Default width of the band around `Re F = 1/2` counted as both regions.
pub const REGION_TOL: f64 = 1e-9;

/// Position relative to the threshold `Re F = 1/2`. `Neither` marks points
/// where `Re F` cannot be resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionLabel {
    L,
    M,
    Both,
    Neither,
}

impl RegionLabel {
    pub fn is_l(self) -> bool {
        matches!(self, RegionLabel::L | RegionLabel::Both)
    }

    pub fn is_m(self) -> bool {
        matches!(self, RegionLabel::M | RegionLabel::Both)
    }
}

pub fn label_for(re: Option<f64>, tol: f64) -> RegionLabel {
    match re {
        Some(x) if !x.is_nan() => match (x <= 0.5 + tol, x >= 0.5 - tol) {
            (true, true) => RegionLabel::Both,
            (true, false) => RegionLabel::L,
            (false, true) => RegionLabel::M,
            (false, false) => unreachable!("tolerance is non-negative"),
        },
        _ => RegionLabel::Neither,
    }
}

pub fn classify_region(f: &StageFunction, pt: &C2Point, tol: f64) -> RegionLabel {
    label_for(f.re(pt), tol.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::{BiPoly, ScaledPoly};
    use num_complex::Complex64;

    #[test]
    fn worked_labels() {
        let p = BiPoly::parse_record("[[1,0,1,2,0,1],[0,1,1,2,0,1]]").unwrap();
        let f = StageFunction::base(ScaledPoly::normalize(&p, Complex64::new(0.5, 0.0)).unwrap());
        assert_eq!(classify_region(&f, &C2Point::ORIGIN, REGION_TOL), RegionLabel::M);
        assert_eq!(classify_region(&f, &C2Point::real(0.4, 0.4), REGION_TOL), RegionLabel::L);
        assert_eq!(classify_region(&f, &C2Point::real(1.0, 0.0), REGION_TOL), RegionLabel::L);
        assert_eq!(classify_region(&f, &C2Point::real(0.25, 0.25), REGION_TOL), RegionLabel::Both);
    }

    #[test]
    fn unresolved_is_neither() {
        assert_eq!(label_for(None, REGION_TOL), RegionLabel::Neither);
        assert!(!RegionLabel::Neither.is_l() && !RegionLabel::Neither.is_m());
    }
}
