//! Choice of the exponent `N` that pushes `|exp(N(F_prev - 1))·G|` below
//! `1/4` on the L-samples.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{C2Point, PointCloud};
use crate::polynomials::ScaledPoly;

use super::stage_fn::StageFunction;

const LN_4: f64 = 2.0 * LN_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentChoice {
    pub n: u32,
    /// `max (ln|G| + ln 4)/(1 - Re F_prev)` over the samples, before the
    /// safety factor.
    #[serde(with = "crate::floats")]
    pub critical: f64,
    pub safety: f64,
}

/// `(Re F_prev, ln|G|)` at every sample; unresolved samples are an error.
fn sample_terms(
    prev: &StageFunction,
    g: &ScaledPoly,
    samples: &PointCloud,
) -> Result<Vec<(C2Point, f64, f64)>> {
    samples
        .iter()
        .map(|pt| {
            let re = prev.re(pt).ok_or_else(|| {
                Error::ContractViolation(format!("Re F_{} unresolved at L-sample {pt}", prev.depth()))
            })?;
            if re >= 1.0 {
                return Err(Error::ContractViolation(format!(
                    "L-sample {pt} has Re F_{} = {re} >= 1",
                    prev.depth()
                )));
            }
            Ok((*pt, re, g.eval(pt).norm().ln()))
        })
        .collect()
}

/// Smallest `N >= 1` with `N > safety·x`, where `x` is the critical ratio;
/// at `safety = 1` this is exactly the least `N` satisfying
/// `N(Re F_prev - 1) + ln|G| < ln(1/4)` on every sample.
pub fn select_exponent(
    prev: &StageFunction,
    g: &ScaledPoly,
    l_samples: &PointCloud,
    safety: f64,
    max_n: u32,
) -> Result<ExponentChoice> {
    if safety.is_nan() || safety < 1.0 {
        return Err(Error::InvalidParameter(format!("safety factor {safety} < 1")));
    }
    let terms = sample_terms(prev, g, l_samples)?;
    let critical = terms
        .iter()
        .map(|&(_, re, ln_g)| (ln_g + LN_4) / (1.0 - re))
        .fold(f64::NEG_INFINITY, f64::max);
    let scaled = safety * critical;
    if scaled.is_nan() || scaled >= max_n as f64 {
        return Err(Error::Budget(format!(
            "exponent {scaled:.3} exceeds max_N = {max_n} at stage {}",
            prev.depth() + 1
        )));
    }
    let n = if scaled < 1.0 { 1 } else { scaled.floor() as u32 + 1 };
    Ok(ExponentChoice {
        n,
        critical,
        safety,
    })
}

/// `max N(Re F_prev - 1) + ln|G|` over the samples: the log of the largest
/// `|F_next|` value the exponent produces there.
pub fn exponent_log_bound(
    prev: &StageFunction,
    g: &ScaledPoly,
    samples: &PointCloud,
    n: u32,
) -> Result<f64> {
    Ok(sample_terms(prev, g, samples)?
        .iter()
        .map(|&(_, re, ln_g)| n as f64 * (re - 1.0) + ln_g)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// True when `n - 1` fails the `ln(1/4)` inequality on some sample (or
/// `n = 1`).
pub fn exponent_is_minimal(
    prev: &StageFunction,
    g: &ScaledPoly,
    samples: &PointCloud,
    n: u32,
) -> Result<bool> {
    if n <= 1 {
        return Ok(true);
    }
    Ok(exponent_log_bound(prev, g, samples, n - 1)? >= -LN_4)
}
