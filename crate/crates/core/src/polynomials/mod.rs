//! Exact bivariate polynomials over Q + iQ, the enumerated family, the
//! avoiding sequence of target values, and normalized level polynomials.

pub mod bipoly;
pub mod family;
pub mod gaussian;
pub mod scaled;
pub mod zeta;

pub use bipoly::{monomials, BiPoly, ComplexPoly, TermRecord};
pub use family::{enumerate_family, FamilyEnumerator};
pub use gaussian::GaussianRational;
pub use scaled::ScaledPoly;
pub use zeta::{zeta_sequence, ZetaSequence, ZetaValue};

use crate::analytic::Holomorphic;
use crate::error::{Error, Result};
use crate::geometry::PointCloud;

/// `max |f|` over the sample: a lower bound for the sup-norm on the sampled
/// compact set.
pub fn sup_norm_on_cloud<F: Holomorphic + ?Sized>(f: &F, cloud: &PointCloud) -> Result<f64> {
    cloud.require_non_empty("sup-norm sample")?;
    let mut best = 0.0f64;
    for p in cloud.iter() {
        let v = f
            .value(p)
            .ok_or_else(|| Error::Range(format!("function not representable at {p}")))?;
        best = best.max(v.norm());
    }
    Ok(best)
}
