use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::analytic::{Gradient, Holomorphic};
use crate::error::{Error, Result};
use crate::geometry::C2Point;
use crate::polynomials::gaussian::GaussianRational;

/// Monomials `z^m w^n` of total degree at most `degree`, graded, and within a
/// degree by decreasing power of `z`: `1, z, w, z², zw, w², ...`.
pub fn monomials(degree: u32) -> Vec<(u32, u32)> {
    (0..=degree)
        .flat_map(|d| (0..=d).rev().map(move |m| (m, d - m)))
        .collect()
}

/// Dense polynomial with floating coefficients, evaluated by nested Horner.
///
/// `rows[n][m]` is the coefficient of `z^m w^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoly {
    degree: u32,
    rows: Vec<Vec<Complex64>>,
}

impl ComplexPoly {
    pub fn zero(degree: u32) -> Self {
        let rows = (0..=degree)
            .map(|n| vec![Complex64::new(0.0, 0.0); (degree - n + 1) as usize])
            .collect();
        ComplexPoly { degree, rows }
    }

    /// Coefficients listed in [`monomials`] order.
    pub fn from_coefficients(degree: u32, coeffs: &[Complex64]) -> Self {
        let mut p = ComplexPoly::zero(degree);
        for (&(m, n), &c) in monomials(degree).iter().zip(coeffs) {
            p.rows[n as usize][m as usize] = c;
        }
        p
    }

    pub fn coefficients(&self) -> Vec<Complex64> {
        monomials(self.degree)
            .into_iter()
            .map(|(m, n)| self.rows[n as usize][m as usize])
            .collect()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn eval(&self, pt: &C2Point) -> Complex64 {
        self.rows.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, row| {
            let r = row
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |a, &c| a * pt.z + c);
            acc * pt.w + r
        })
    }

    pub fn eval_with_gradient(&self, pt: &C2Point) -> (Complex64, Gradient) {
        let zero = Complex64::new(0.0, 0.0);
        // Horner in w over row values r_n(z) and their z-derivatives.
        let (mut v, mut vw, mut vz) = (zero, zero, zero);
        for row in self.rows.iter().rev() {
            let (mut r, mut rz) = (zero, zero);
            for &c in row.iter().rev() {
                rz = rz * pt.z + r;
                r = r * pt.z + c;
            }
            vw = vw * pt.w + v;
            v = v * pt.w + r;
            vz = vz * pt.w + rz;
        }
        (v, [vz, vw])
    }

    /// Sum of coefficient moduli.
    pub fn l1_norm(&self) -> f64 {
        self.rows.iter().flatten().map(|c| c.norm()).sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        ComplexPoly {
            degree: self.degree,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|c| c * factor).collect())
                .collect(),
        }
    }
}

impl Holomorphic for ComplexPoly {
    fn value(&self, pt: &C2Point) -> Option<Complex64> {
        Some(self.eval(pt))
    }

    fn value_and_gradient(&self, pt: &C2Point) -> Option<(Complex64, Gradient)> {
        Some(self.eval_with_gradient(pt))
    }
}

/// Serialized form of one term: `(deg_z, deg_w, re_num, re_den, im_num, im_den)`.
pub type TermRecord = [i64; 6];

/// Exact bivariate polynomial over Q + iQ.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(into = "Vec<TermRecord>", try_from = "Vec<TermRecord>")]
pub struct BiPoly {
    coeffs: BTreeMap<(u32, u32), GaussianRational>,
    dense: ComplexPoly,
}

impl PartialEq for BiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for BiPoly {}

impl BiPoly {
    /// Zero coefficients are dropped.
    pub fn new(terms: impl IntoIterator<Item = ((u32, u32), GaussianRational)>) -> Self {
        let coeffs: BTreeMap<_, _> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let degree = coeffs.keys().map(|&(m, n)| m + n).max().unwrap_or(0);
        let mut dense = ComplexPoly::zero(degree);
        for (&(m, n), c) in &coeffs {
            dense.rows[n as usize][m as usize] = c.to_complex();
        }
        BiPoly { coeffs, dense }
    }

    pub fn coefficients(&self) -> &BTreeMap<(u32, u32), GaussianRational> {
        &self.coeffs
    }

    pub fn degree(&self) -> u32 {
        self.dense.degree
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.keys().all(|&(m, n)| m + n == 0)
    }

    /// Exact value at the origin.
    pub fn constant_term(&self) -> GaussianRational {
        self.coeffs
            .get(&(0, 0))
            .copied()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn as_complex(&self) -> &ComplexPoly {
        &self.dense
    }

    pub fn eval(&self, pt: &C2Point) -> Complex64 {
        self.dense.eval(pt)
    }

    /// Least common denominator of all coefficient parts.
    pub fn denominator(&self) -> i64 {
        self.coeffs
            .values()
            .fold(1i64, |acc, c| num_integer::lcm(acc, c.denominator()))
    }

    /// Decides `Σ|c| <= bound` exactly.
    ///
    /// When every modulus is rational the sum is compared in Q. Otherwise the
    /// sum contains an irrational square root and cannot equal the rational
    /// bound (square roots of distinct square-free integers are linearly
    /// independent over Q), so a floating comparison decides it.
    pub fn l1_norm_at_most(&self, bound: Rational64) -> bool {
        let moduli: Option<Vec<Rational64>> =
            self.coeffs.values().map(|c| c.rational_modulus()).collect();
        match moduli {
            Some(ms) => ms.into_iter().fold(Rational64::zero(), |a, b| a + b) <= bound,
            None => {
                let s: f64 = self.coeffs.values().map(|c| c.to_complex().norm()).sum();
                s <= bound.to_f64().expect("ratio converts")
            }
        }
    }

    pub fn records(&self) -> Vec<TermRecord> {
        self.coeffs
            .iter()
            .map(|(&(m, n), c)| {
                let (a, b, x, y) = c.parts();
                [m as i64, n as i64, a, b, x, y]
            })
            .collect()
    }

    pub fn from_records(records: &[TermRecord]) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for r in records {
            if r[0] < 0 || r[1] < 0 {
                return Err(Error::parse("polynomial record", "negative degree"));
            }
            let c = GaussianRational::from_parts(r[2], r[3], r[4], r[5])?;
            if terms.insert((r[0] as u32, r[1] as u32), c).is_some() {
                return Err(Error::parse("polynomial record", "repeated monomial"));
            }
        }
        Ok(BiPoly::new(terms))
    }

    /// Parses the structured record `[[deg_z,deg_w,re_num,re_den,im_num,im_den], ...]`.
    pub fn parse_record(text: &str) -> Result<Self> {
        let recs: Vec<TermRecord> =
            serde_json::from_str(text.trim()).map_err(|e| Error::parse("polynomial record", e))?;
        BiPoly::from_records(&recs)
    }

    pub fn to_record_string(&self) -> String {
        serde_json::to_string(&self.records()).expect("records serialize")
    }
}

impl From<BiPoly> for Vec<TermRecord> {
    fn from(p: BiPoly) -> Self {
        p.records()
    }
}

impl TryFrom<Vec<TermRecord>> for BiPoly {
    type Error = Error;

    fn try_from(v: Vec<TermRecord>) -> Result<Self> {
        BiPoly::from_records(&v)
    }
}

impl Holomorphic for BiPoly {
    fn value(&self, pt: &C2Point) -> Option<Complex64> {
        Some(self.eval(pt))
    }

    fn value_and_gradient(&self, pt: &C2Point) -> Option<(Complex64, Gradient)> {
        Some(self.dense.eval_with_gradient(pt))
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&(m, n), c) in &self.coeffs {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mono = match (m, n) {
                (0, 0) => String::new(),
                _ => {
                    let part = |v: &str, e: u32| match e {
                        0 => String::new(),
                        1 => v.to_string(),
                        e => format!("{v}^{e}"),
                    };
                    format!("{}{}", part("z", m), part("w", n))
                }
            };
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.re.is_zero() && c.im.is_zero() {
                unreachable!("zero coefficients are never stored");
            } else {
                write!(f, "{c}*{mono}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_sum() -> BiPoly {
        BiPoly::new([
            ((1, 0), GaussianRational::real(1, 2)),
            ((0, 1), GaussianRational::real(1, 2)),
        ])
    }

    #[test]
    fn eval_examples() {
        let p = half_sum();
        assert_eq!(p.eval(&C2Point::ORIGIN), Complex64::new(0.0, 0.0));
        assert_eq!(p.eval(&C2Point::real(1.0, 1.0)), Complex64::new(1.0, 0.0));
        let zw = BiPoly::new([((1, 1), GaussianRational::real(1, 1))]);
        let i = Complex64::new(0.0, 1.0);
        assert_eq!(zw.eval(&C2Point::new(i, i)), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let p = BiPoly::new([
            ((2, 1), GaussianRational::from_parts(1, 3, -1, 4).unwrap()),
            ((0, 3), GaussianRational::real(1, 4)),
            ((1, 0), GaussianRational::from_parts(0, 1, 1, 2).unwrap()),
            ((0, 0), GaussianRational::real(-1, 5)),
        ]);
        let pt = C2Point::new(Complex64::new(0.3, -0.6), Complex64::new(-0.1, 0.7));
        let (v, g) = p.value_and_gradient(&pt).unwrap();
        let (v2, g2) = crate::analytic::finite_difference_gradient(&p, &pt, 1e-6).unwrap();
        assert!((v - v2).norm() == 0.0);
        assert!((g[0] - g2[0]).norm() < 1e-8);
        assert!((g[1] - g2[1]).norm() < 1e-8);
    }

    #[test]
    fn record_round_trip() {
        let p = half_sum();
        let s = p.to_record_string();
        assert_eq!(s, "[[0,1,1,2,0,1],[1,0,1,2,0,1]]");
        assert_eq!(BiPoly::parse_record(&s).unwrap(), p);
        assert!(BiPoly::parse_record("[[1,0,1,0,0,1]]").is_err());
        assert!(BiPoly::parse_record("[[1,0,1,2,0,1],[1,0,1,2,0,1]]").is_err());
    }

    #[test]
    fn exact_l1_bound() {
        assert!(half_sum().l1_norm_at_most(Rational64::new(1, 1)));
        let sum = BiPoly::new([
            ((1, 0), GaussianRational::real(1, 1)),
            ((0, 1), GaussianRational::real(1, 1)),
        ]);
        assert!(!sum.l1_norm_at_most(Rational64::new(1, 1)));
        // |(1+i)/2| = 0.7071..., plus 1/4 stays under 1; plus 1/2 exceeds it.
        let a = BiPoly::new([
            ((1, 0), GaussianRational::from_parts(1, 2, 1, 2).unwrap()),
            ((0, 1), GaussianRational::real(1, 4)),
        ]);
        assert!(a.l1_norm_at_most(Rational64::new(1, 1)));
        let b = BiPoly::new([
            ((1, 0), GaussianRational::from_parts(1, 2, 1, 2).unwrap()),
            ((0, 1), GaussianRational::real(1, 2)),
        ]);
        assert!(!b.l1_norm_at_most(Rational64::new(1, 1)));
    }

    #[test]
    fn monomial_order() {
        assert_eq!(monomials(2), vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]);
        let c: Vec<Complex64> = (0..6).map(|k| Complex64::new(k as f64, 0.0)).collect();
        assert_eq!(ComplexPoly::from_coefficients(2, &c).coefficients(), c);
    }
}
