use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An element of Q + iQ with both parts in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational64,
    pub im: Rational64,
}

impl GaussianRational {
    pub fn new(re: Rational64, im: Rational64) -> Self {
        GaussianRational { re, im }
    }

    /// `(re_num/re_den) + i (im_num/im_den)`.
    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Result<Self> {
        if re_den == 0 || im_den == 0 {
            return Err(Error::parse("gaussian rational", "zero denominator"));
        }
        Ok(GaussianRational {
            re: Rational64::new(re_num, re_den),
            im: Rational64::new(im_num, im_den),
        })
    }

    pub fn real(num: i64, den: i64) -> Self {
        GaussianRational::new(Rational64::new(num, den), Rational64::zero())
    }

    pub fn zero() -> Self {
        GaussianRational::new(Rational64::zero(), Rational64::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `|c|²`, exactly.
    pub fn norm_sqr(&self) -> Rational64 {
        self.re * self.re + self.im * self.im
    }

    /// `|c|` when it is rational.
    pub fn rational_modulus(&self) -> Option<Rational64> {
        let n = self.norm_sqr();
        Some(Rational64::new(exact_isqrt(*n.numer())?, exact_isqrt(*n.denom())?))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().expect("i64 ratio converts"),
            self.im.to_f64().expect("i64 ratio converts"),
        )
    }

    /// Least common denominator of the two parts.
    pub fn denominator(&self) -> i64 {
        self.re.denom().lcm(self.im.denom())
    }

    /// `(re_num, re_den, im_num, im_den)`.
    pub fn parts(&self) -> (i64, i64, i64, i64) {
        (*self.re.numer(), *self.re.denom(), *self.im.numer(), *self.im.denom())
    }
}

fn exact_isqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let r = (n as f64).sqrt().round() as i64;
    (r - 1..=r + 1).find(|&c| c >= 0 && c * c == n)
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im > Rational64::zero() {
                    write!(f, "({}+{}i)", self.re, self.im)
                } else {
                    write!(f, "({}-{}i)", self.re, -self.im)
                }
            }
        }
    }
}
