use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{Gradient, Holomorphic};
use crate::error::{Error, Result};
use crate::geometry::C2Point;
use crate::polynomials::bipoly::BiPoly;

/// `(base - shift) / scale` with `scale = base(0,0) - shift`: equal to 1 at
/// the origin and vanishing exactly on `{base = shift}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledPoly {
    pub base: BiPoly,
    pub shift: Complex64,
    pub scale: Complex64,
}

impl ScaledPoly {
    /// Normalizes `p` against the target value `a`.
    pub fn normalize(p: &BiPoly, a: Complex64) -> Result<Self> {
        let scale = p.eval(&C2Point::ORIGIN) - a;
        if scale == Complex64::new(0.0, 0.0) || !scale.is_finite() {
            return Err(Error::DegenerateScale(format!("p = {p}, a = {a}")));
        }
        Ok(ScaledPoly {
            base: p.clone(),
            shift: a,
            scale,
        })
    }

    pub fn eval(&self, pt: &C2Point) -> Complex64 {
        (self.base.eval(pt) - self.shift) / self.scale
    }

    pub fn eval_with_gradient(&self, pt: &C2Point) -> (Complex64, Gradient) {
        let (v, g) = self.base.as_complex().eval_with_gradient(pt);
        ((v - self.shift) / self.scale, [g[0] / self.scale, g[1] / self.scale])
    }

    /// Triangle-inequality bound `(1 + |a|) / |p(0,0) - a|` on the bidisk,
    /// valid for family members (`|p| <= 1` there).
    pub fn bidisk_bound(&self) -> f64 {
        (1.0 + self.shift.norm()) / self.scale.norm()
    }
}

impl Holomorphic for ScaledPoly {
    fn value(&self, pt: &C2Point) -> Option<Complex64> {
        Some(self.eval(pt))
    }

    fn value_and_gradient(&self, pt: &C2Point) -> Option<(Complex64, Gradient)> {
        Some(self.eval_with_gradient(pt))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{sample_bidisk, GridSpec};
    use crate::polynomials::family::enumerate_family;

    fn half_sum() -> BiPoly {
        BiPoly::parse_record("[[1,0,1,2,0,1],[0,1,1,2,0,1]]").unwrap()
    }

    #[test]
    fn worked_normalization() {
        let g = ScaledPoly::normalize(&half_sum(), Complex64::new(0.5, 0.0)).unwrap();
        assert_eq!(g.eval(&C2Point::ORIGIN), Complex64::new(1.0, 0.0));
        // G = 1 - (z + w)
        for &(z, w) in &[(0.3, -0.1), (0.7, 0.2), (-0.4, 0.9)] {
            let pt = C2Point::real(z, w);
            assert!((g.eval(&pt) - Complex64::new(1.0 - z - w, 0.0)).norm() < 1e-15);
        }
        assert_eq!(g.eval(&C2Point::real(0.25, 0.75)), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn product_normalization() {
        let zw = BiPoly::parse_record("[[1,1,1,1,0,1]]").unwrap();
        let a = Complex64::new(0.0, 1.0 / 2f64.sqrt());
        let g = ScaledPoly::normalize(&zw, a).unwrap();
        assert_eq!(g.eval(&C2Point::ORIGIN), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn degenerate_scale() {
        assert!(matches!(
            ScaledPoly::normalize(&half_sum(), Complex64::new(0.0, 0.0)),
            Err(Error::DegenerateScale(_))
        ));
    }

    #[test]
    fn triangle_bound_on_grid() {
        let grid = sample_bidisk(&GridSpec::new(5, 8));
        for (k, p) in enumerate_family(2, 2, 60).iter().enumerate() {
            let a = Complex64::new(0.3 - 0.01 * k as f64, 0.2);
            let g = ScaledPoly::normalize(p, a).unwrap();
            let bound = g.bidisk_bound();
            assert!(grid.iter().all(|x| g.eval(x).norm() <= bound * (1.0 + 1e-12)));
        }
    }
}
