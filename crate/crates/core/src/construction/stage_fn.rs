//! The entire functions `F_1 = G_1`, `F_{k+1} = exp(N_{k+1}(F_k - 1))·G_{k+1}`.
//!
//! Values are carried in polar-logarithmic form `exp(ln_abs + i·arg)` so that
//! the exponential factor can underflow to zero or grow past `f64::MAX`
//! without producing NaN. Where the phase of a level cannot be resolved in
//! double precision the value is reported as [`StageValue::Unresolved`].

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{Gradient, Holomorphic};
use crate::error::{Error, Result};
use crate::geometry::C2Point;
use crate::polynomials::ScaledPoly;

/// Above this `|Im|` of an exponent the phase of `exp` is not trusted.
pub const PHASE_LIMIT: f64 = 1e9;
/// `exp` of anything larger overflows `f64`.
const LN_MAX: f64 = 709.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StageValue {
    Resolved {
        ln_abs: f64,
        arg: f64,
        /// Present when the value fits in an `f64` pair.
        value: Option<Complex64>,
    },
    /// Magnitude (when known) without a usable phase.
    Unresolved { ln_abs: Option<f64> },
}

impl StageValue {
    fn from_complex(v: Complex64) -> Self {
        StageValue::Resolved {
            ln_abs: v.norm().ln(),
            arg: v.arg(),
            value: Some(v),
        }
    }

    pub fn ln_abs(&self) -> Option<f64> {
        match *self {
            StageValue::Resolved { ln_abs, .. } => Some(ln_abs),
            StageValue::Unresolved { ln_abs } => ln_abs,
        }
    }

    pub fn complex(&self) -> Option<Complex64> {
        match *self {
            StageValue::Resolved { value, .. } => value,
            StageValue::Unresolved { .. } => None,
        }
    }

    /// Real part; may be `±inf` for resolved values beyond `f64` range.
    pub fn re(&self) -> Option<f64> {
        match *self {
            StageValue::Resolved {
                value: Some(v), ..
            } => Some(v.re),
            StageValue::Resolved { ln_abs, arg, .. } => Some(signed_exp(ln_abs, arg.cos())),
            StageValue::Unresolved { .. } => None,
        }
    }

    /// `Re` of the exponent `N·(F - 1)` built from this value.
    fn exponent(&self, n: f64) -> Option<(f64, f64)> {
        match *self {
            StageValue::Resolved {
                value: Some(v), ..
            } => Some((n * (v.re - 1.0), n * v.im)),
            StageValue::Resolved { ln_abs, arg, .. } => {
                let re = signed_exp(ln_abs, arg.cos());
                let im = signed_exp(ln_abs, arg.sin());
                Some((n * (re - 1.0), n * im))
            }
            StageValue::Unresolved { .. } => None,
        }
    }
}

/// `e^ln · c` computed without forming `e^ln` alone.
fn signed_exp(ln: f64, c: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c.signum() * (ln + c.abs().ln()).exp()
    }
}

fn compose_value(prev: &StageValue, n: u32, g: Complex64) -> StageValue {
    let Some((re_e, im_e)) = prev.exponent(n as f64) else {
        return StageValue::Unresolved { ln_abs: None };
    };
    let ln_g = g.norm().ln();
    let ln_abs = re_e + ln_g;
    if ln_abs.is_nan() {
        return StageValue::Unresolved { ln_abs: None };
    }
    if !im_e.is_finite() || im_e.abs() > PHASE_LIMIT {
        if ln_abs < -745.0 {
            // Below the smallest subnormal the phase is irrelevant.
            return StageValue::Resolved {
                ln_abs,
                arg: 0.0,
                value: Some(Complex64::new(0.0, 0.0)),
            };
        }
        return StageValue::Unresolved {
            ln_abs: Some(ln_abs),
        };
    }
    let value = if re_e <= LN_MAX {
        let v = Complex64::new(re_e, im_e).exp() * g;
        v.is_finite().then_some(v)
    } else if ln_abs <= LN_MAX {
        Some(Complex64::from_polar(ln_abs.exp(), im_e + g.arg()))
    } else {
        None
    };
    StageValue::Resolved {
        ln_abs,
        arg: (im_e + g.arg()).rem_euclid(TAU),
        value,
    }
}

/// One level of the recursion: the exponent `N` and the normalized polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComposeStep {
    pub n: u32,
    pub g: ScaledPoly,
}

/// `F_j`, stored as `G_1` followed by `(N_2, G_2), ..., (N_j, G_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageFunction {
    pub base: ScaledPoly,
    pub steps: Vec<ComposeStep>,
}

impl StageFunction {
    pub fn base(g: ScaledPoly) -> Self {
        StageFunction {
            base: g,
            steps: Vec::new(),
        }
    }

    /// `F_{j+1} = exp(n·(F_j - 1))·g`.
    pub fn compose(&self, n: u32, g: ScaledPoly) -> Self {
        let mut steps = self.steps.clone();
        steps.push(ComposeStep { n, g });
        StageFunction {
            base: self.base.clone(),
            steps,
        }
    }

    /// Stage index `j` of this function.
    pub fn depth(&self) -> usize {
        self.steps.len() + 1
    }

    /// `F_k` for `k <= depth`.
    pub fn truncated(&self, depth: usize) -> StageFunction {
        assert!(depth >= 1 && depth <= self.depth(), "depth out of range");
        StageFunction {
            base: self.base.clone(),
            steps: self.steps[..depth - 1].to_vec(),
        }
    }

    /// `G_j`, the polynomial of the outermost level.
    pub fn last_poly(&self) -> &ScaledPoly {
        self.steps.last().map(|s| &s.g).unwrap_or(&self.base)
    }

    /// Values `F_1(pt), ..., F_j(pt)`.
    pub fn eval_levels(&self, pt: &C2Point) -> Vec<StageValue> {
        let mut out = Vec::with_capacity(self.depth());
        let mut v = StageValue::from_complex(self.base.eval(pt));
        out.push(v);
        for s in &self.steps {
            v = compose_value(&v, s.n, s.g.eval(pt));
            out.push(v);
        }
        out
    }

    pub fn eval_value(&self, pt: &C2Point) -> StageValue {
        let mut v = StageValue::from_complex(self.base.eval(pt));
        for s in &self.steps {
            v = compose_value(&v, s.n, s.g.eval(pt));
        }
        v
    }

    /// `F_j(pt)` as a complex number, or a range error when it is not
    /// representable.
    pub fn eval(&self, pt: &C2Point) -> Result<Complex64> {
        self.eval_value(pt).complex().ok_or_else(|| {
            Error::Range(format!(
                "F_{} at {pt} exceeds double precision (ln|F| = {:?})",
                self.depth(),
                self.eval_value(pt).ln_abs()
            ))
        })
    }

    /// `ln|F_j(pt)|`; `-inf` at exact zeros, `None` where the magnitude
    /// cannot be determined.
    pub fn log_magnitude(&self, pt: &C2Point) -> Option<f64> {
        self.eval_value(pt).ln_abs()
    }

    pub fn re(&self, pt: &C2Point) -> Option<f64> {
        self.eval_value(pt).re()
    }

    /// Value and analytic gradient, by the recursion
    /// `∇F_{k+1} = F_{k+1}·N·∇F_k + exp(N(F_k - 1))·∇G_{k+1}`.
    pub fn eval_with_gradient(&self, pt: &C2Point) -> Option<(Complex64, Gradient)> {
        let (mut f, mut grad) = self.base.eval_with_gradient(pt);
        for s in &self.steps {
            let (g, dg) = s.g.eval_with_gradient(pt);
            let n = s.n as f64;
            let ex = ((f - 1.0) * n).exp();
            let next = ex * g;
            grad = [
                next * n * grad[0] + ex * dg[0],
                next * n * grad[1] + ex * dg[1],
            ];
            f = next;
            if !(f.is_finite() && grad[0].is_finite() && grad[1].is_finite()) {
                return None;
            }
        }
        Some((f, grad))
    }

    /// `(G_1 record, (N_2, G_2), ...)` flattened for persistence.
    pub fn levels(&self) -> impl Iterator<Item = (Option<u32>, &ScaledPoly)> {
        std::iter::once((None, &self.base)).chain(self.steps.iter().map(|s| (Some(s.n), &s.g)))
    }
}

impl Holomorphic for StageFunction {
    fn value(&self, pt: &C2Point) -> Option<Complex64> {
        self.eval_value(pt).complex()
    }

    fn value_and_gradient(&self, pt: &C2Point) -> Option<(Complex64, Gradient)> {
        self.eval_with_gradient(pt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::BiPoly;
    use proptest::prelude::*;

    fn worked() -> StageFunction {
        let p = BiPoly::parse_record("[[1,0,1,2,0,1],[0,1,1,2,0,1]]").unwrap();
        StageFunction::base(ScaledPoly::normalize(&p, Complex64::new(0.5, 0.0)).unwrap())
    }

    fn two_stage(n: u32) -> StageFunction {
        let zw = BiPoly::parse_record("[[1,1,1,1,0,1]]").unwrap();
        let g2 = ScaledPoly::normalize(&zw, Complex64::new(0.1, 0.2)).unwrap();
        worked().compose(n, g2)
    }

    #[test]
    fn origin_is_one() {
        assert_eq!(worked().eval(&C2Point::ORIGIN).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(two_stage(7).eval(&C2Point::ORIGIN).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(worked().log_magnitude(&C2Point::ORIGIN), Some(0.0));
    }

    #[test]
    fn worked_line_is_level_one() {
        let f = worked();
        for k in -10..=10 {
            let t = k as f64 / 10.0;
            let v = f.eval(&C2Point::real(t, -t)).unwrap();
            assert!((v - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn second_stage_vanishes_on_its_level_set() {
        let f = two_stage(5);
        // zw = 0.1 + 0.2i at z = 0.5
        let w = Complex64::new(0.1, 0.2) / 0.5;
        let v = f.eval(&C2Point::new(Complex64::new(0.5, 0.0), w)).unwrap();
        assert!(v.norm() < 1e-6);
    }

    #[test]
    fn underflow_is_zero_not_nan() {
        // F_1 = 1 - (z+w) has Re F_1 = -1 at (1,1); N huge sends F_2 to 0.
        let f = two_stage(1_000_000);
        let v = f.eval(&C2Point::real(1.0, 1.0)).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
        let ln = f.log_magnitude(&C2Point::real(1.0, 1.0)).unwrap();
        assert!(ln < -1e6);
    }

    #[test]
    fn overflow_is_range_error() {
        let f = two_stage(1_000_000);
        let pt = C2Point::real(-1.0, -1.0); // Re F_1 = 3
        assert!(matches!(f.eval(&pt), Err(Error::Range(_))));
        assert!(f.log_magnitude(&pt).unwrap() > 1e6);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let f = two_stage(3);
        let pt = C2Point::new(Complex64::new(0.2, 0.1), Complex64::new(-0.3, 0.25));
        let (v, g) = f.eval_with_gradient(&pt).unwrap();
        let (v2, g2) = crate::analytic::finite_difference_gradient(&f, &pt, 1e-6).unwrap();
        assert!((v - v2).norm() < 1e-14);
        assert!((g[0] - g2[0]).norm() < 1e-7 * (1.0 + g[0].norm()));
        assert!((g[1] - g2[1]).norm() < 1e-7 * (1.0 + g[1].norm()));
    }

    proptest! {
        #[test]
        fn log_magnitude_agrees_with_value(
            zr in -0.7f64..0.7, zi in -0.7f64..0.7, wr in -0.7f64..0.7, wi in -0.7f64..0.7,
            n in 1u32..40,
        ) {
            let f = two_stage(n);
            let pt = C2Point::new(Complex64::new(zr, zi), Complex64::new(wr, wi));
            if let Ok(v) = f.eval(&pt) {
                if v.norm() > 1e-300 {
                    let ln = f.log_magnitude(&pt).unwrap();
                    prop_assert!((ln - v.norm().ln()).abs() < 1e-9);
                }
            }
        }

        #[test]
        fn no_nan_on_bidisk(
            zr in -1f64..1.0, zi in -1f64..1.0, wr in -1f64..1.0, wi in -1f64..1.0,
            n in 1u32..100_000,
        ) {
            let f = two_stage(n).compose(n, two_stage(1).base.clone());
            let pt = C2Point::new(Complex64::new(zr, zi), Complex64::new(wr, wi));
            for v in f.eval_levels(&pt) {
                if let Some(ln) = v.ln_abs() { prop_assert!(!ln.is_nan()); }
                if let Some(c) = v.complex() { prop_assert!(c.is_finite()); }
            }
        }
    }
}
