//! Holomorphic functions of two complex variables, as seen by the numerical
//! routines (Newton polishing, continuation, sup-norm sampling).

use num_complex::Complex64;

use crate::geometry::C2Point;

/// Step of the central finite differences used when a function provides no
/// analytic gradient.
pub const FD_STEP: f64 = 1e-6;

pub type Gradient = [Complex64; 2];

pub trait Holomorphic: Sync {
    /// `None` when the value is not representable at `pt`.
    fn value(&self, pt: &C2Point) -> Option<Complex64>;

    /// Value together with `(∂f/∂z, ∂f/∂w)`.
    ///
    /// The default uses central differences along the real axis of each
    /// variable, which for a holomorphic function gives the complex partials.
    fn value_and_gradient(&self, pt: &C2Point) -> Option<(Complex64, Gradient)> {
        finite_difference_gradient(self, pt, FD_STEP)
    }
}

pub fn finite_difference_gradient<F: Holomorphic + ?Sized>(
    f: &F,
    pt: &C2Point,
    h: f64,
) -> Option<(Complex64, Gradient)> {
    let v = f.value(pt)?;
    let dh = Complex64::new(h, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let dz = (f.value(&pt.offset(dh, zero))? - f.value(&pt.offset(-dh, zero))?) / (2.0 * h);
    let dw = (f.value(&pt.offset(zero, dh))? - f.value(&pt.offset(zero, -dh))?) / (2.0 * h);
    Some((v, [dz, dw]))
}

impl<F> Holomorphic for F
where
    F: Fn(&C2Point) -> Complex64 + Sync,
{
    fn value(&self, pt: &C2Point) -> Option<Complex64> {
        let v = self(pt);
        v.is_finite().then_some(v)
    }
}
