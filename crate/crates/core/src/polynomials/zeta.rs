//! A dense sequence in the open unit disk that avoids Q + iQ.
//!
//! Level `l` contributes the dyadic points `(m + i n)/2^l` not already used at
//! a coarser level, ordered by modulus then argument, each shifted by the
//! irrational offset `(√2 + i√3)·10^-(l+1)`. Values whose modulus reaches
//! `1 - 1e-6` are dropped.

use std::f64::consts::{SQRT_2, TAU};

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::polynomials::gaussian::GaussianRational;

pub const ZETA_MAX_MODULUS: f64 = 1.0 - 1e-6;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// One value `(base_re + sqrt2_coeff·√2) + i(base_im + sqrt3_coeff·√3)`
/// with rational coefficients; the sequence uses `sqrt2_coeff = sqrt3_coeff
/// = 10^-(level+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaValue {
    pub base_re: Rational64,
    pub base_im: Rational64,
    pub sqrt2_coeff: Rational64,
    pub sqrt3_coeff: Rational64,
    pub level: u32,
}

impl ZetaValue {
    fn at_level(base_re: Rational64, base_im: Rational64, level: u32) -> Self {
        let s = Rational64::new(1, 10i64.pow(level + 1));
        ZetaValue {
            base_re,
            base_im,
            sqrt2_coeff: s,
            sqrt3_coeff: s,
            level,
        }
    }

    pub fn value(&self) -> Complex64 {
        let f = |r: Rational64| r.to_f64().expect("ratio converts");
        Complex64::new(
            f(self.base_re) + SQRT_2 * f(self.sqrt2_coeff),
            f(self.base_im) + SQRT_3 * f(self.sqrt3_coeff),
        )
    }

    /// Exact comparison with a Gaussian rational: `q + r√2` is rational only
    /// when `r = 0`, and likewise for `√3`.
    pub fn equals_gaussian_rational(&self, c: &GaussianRational) -> bool {
        self.sqrt2_coeff == Rational64::from_integer(0)
            && self.sqrt3_coeff == Rational64::from_integer(0)
            && self.base_re == c.re
            && self.base_im == c.im
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaSequence {
    pub values: Vec<ZetaValue>,
}

impl ZetaSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<Complex64> {
        self.values.get(i).map(ZetaValue::value)
    }

    pub fn complex_values(&self) -> Vec<Complex64> {
        self.values.iter().map(ZetaValue::value).collect()
    }
}

fn level_values(level: u32) -> Vec<ZetaValue> {
    let den = 1i64 << level;
    let mut v: Vec<(i64, i64)> = (-den..=den)
        .flat_map(|m| (-den..=den).map(move |n| (m, n)))
        .filter(|&(m, n)| level == 0 || m % 2 != 0 || n % 2 != 0)
        .collect();
    let arg = |m: i64, n: i64| {
        let a = (n as f64).atan2(m as f64);
        if a < 0.0 {
            a + TAU
        } else {
            a
        }
    };
    v.sort_by(|a, b| {
        (a.0 * a.0 + a.1 * a.1)
            .cmp(&(b.0 * b.0 + b.1 * b.1))
            .then(arg(a.0, a.1).total_cmp(&arg(b.0, b.1)))
    });
    v.into_iter()
        .map(|(m, n)| ZetaValue::at_level(Rational64::new(m, den), Rational64::new(n, den), level))
        .filter(|z| z.value().norm() < ZETA_MAX_MODULUS)
        .collect()
}

/// The first `count` values of the sequence.
pub fn zeta_sequence(count: usize) -> ZetaSequence {
    let mut values = Vec::with_capacity(count);
    let mut level = 0;
    while values.len() < count {
        values.extend(level_values(level).into_iter().take(count - values.len()));
        level += 1;
    }
    ZetaSequence { values }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inside_disk_and_irrational() {
        let z = zeta_sequence(500);
        assert_eq!(z.len(), 500);
        for v in &z.values {
            assert!(v.value().norm() < 1.0);
            assert!(!v.equals_gaussian_rational(&GaussianRational::zero()));
        }
        let first = z.get(0).unwrap();
        assert!((first - Complex64::new(SQRT_2 / 10.0, SQRT_3 / 10.0)).norm() < 1e-16);
    }

    #[test]
    fn occupancy_of_first_thousand() {
        let z = zeta_sequence(1000).complex_values();
        // Every disk of radius 0.1 contained in the unit disk: centers on a
        // fine lattice with |c| <= 0.9.
        let steps = 181;
        for a in 0..steps {
            for b in 0..steps {
                let c = Complex64::new(-0.9 + 1.8 * a as f64 / 180.0, -0.9 + 1.8 * b as f64 / 180.0);
                if c.norm() > 0.9 {
                    continue;
                }
                assert!(
                    z.iter().any(|v| (v - c).norm() < 0.1),
                    "disk around {c} is empty"
                );
            }
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(zeta_sequence(300), zeta_sequence(300));
    }
}
