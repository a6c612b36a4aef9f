//! Deterministic enumeration of the polynomial family: non-constant
//! polynomials over Q + iQ with coefficient ℓ1 norm at most 1.
//!
//! Since `|z|, |w| <= 1` on the bidisk, `Σ|c| <= 1` certifies that the
//! polynomial maps the closed bidisk into the closed unit disk.
//!
//! Members are produced in blocks `(degree, denominator)`, degree-major. A
//! block holds the polynomials of exact total degree `d` whose coefficient
//! parts have least common denominator exactly `q`. Inside a block the order
//! is lexicographic on
//! 1. the sorted list of coefficient ranks (the "shape" of the polynomial),
//! 2. the monomial positions of the support,
//! 3. the coefficient ranks in monomial order,
//!
//! where Gaussian integers are ranked by modulus, then argument in `[0, 2π)`.
//! The first block is therefore `z, w, iz, iw, -z, -w, -iz, -iw`.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use num_integer::Integer;
use num_rational::Rational64;

use crate::polynomials::bipoly::{monomials, BiPoly};
use crate::polynomials::gaussian::GaussianRational;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    re: i64,
    im: i64,
    norm_sqr: i64,
    arg: f64,
    modulus: f64,
}

impl Candidate {
    fn new(re: i64, im: i64) -> Self {
        let a = (im as f64).atan2(re as f64);
        Candidate {
            re,
            im,
            norm_sqr: re * re + im * im,
            arg: if a < 0.0 { a + TAU } else { a },
            modulus: ((re * re + im * im) as f64).sqrt(),
        }
    }

    fn cmp_rank(&self, other: &Self) -> Ordering {
        self.norm_sqr
            .cmp(&other.norm_sqr)
            .then(self.arg.total_cmp(&other.arg))
    }
}

/// Gaussian integers of modulus at most `bound`, in rank order.
fn candidates(bound: i64) -> Vec<Candidate> {
    let mut v: Vec<Candidate> = (-bound..=bound)
        .flat_map(|re| (-bound..=bound).map(move |im| Candidate::new(re, im)))
        .filter(|c| c.norm_sqr <= bound * bound)
        .collect();
    v.sort_by(Candidate::cmp_rank);
    v
}

/// One block of the enumeration, already sorted.
fn block(degree: u32, denom: i64) -> Vec<BiPoly> {
    let monos = monomials(degree);
    let cands = candidates(denom);
    let ranks: Vec<usize> = (0..cands.len()).collect();
    let top_start = monos.iter().position(|&(m, n)| m + n == degree).expect("degree present");
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut current = vec![0usize; monos.len()];
    // Budget is compared in floating point with a small allowance; the exact
    // bound is applied to each completed candidate below.
    fn dfs(
        pos: usize,
        budget: f64,
        current: &mut Vec<usize>,
        cands: &[Candidate],
        ranks: &[usize],
        out: &mut Vec<Vec<usize>>,
    ) {
        if pos == current.len() {
            out.push(current.clone());
            return;
        }
        for &r in ranks {
            let c = &cands[r];
            if c.modulus > budget + 1e-9 {
                continue;
            }
            current[pos] = r;
            dfs(pos + 1, budget - c.modulus, current, cands, ranks, out);
        }
    }
    dfs(0, denom as f64, &mut current, &cands, &ranks, &mut found);

    let q = Rational64::from_integer(1);
    let mut members: Vec<(Vec<usize>, Vec<usize>, Vec<usize>, BiPoly)> = Vec::new();
    for ranks_vec in found {
        if ranks_vec[top_start..].iter().all(|&r| cands[r].norm_sqr == 0) {
            continue;
        }
        let g = ranks_vec
            .iter()
            .fold(denom, |acc, &r| acc.gcd(&cands[r].re).gcd(&cands[r].im));
        if g != 1 {
            continue;
        }
        let poly = BiPoly::new(ranks_vec.iter().zip(&monos).map(|(&r, &mono)| {
            let c = &cands[r];
            (
                mono,
                GaussianRational::new(Rational64::new(c.re, denom), Rational64::new(c.im, denom)),
            )
        }));
        if !poly.l1_norm_at_most(q) {
            continue;
        }
        let mut shape: Vec<usize> = ranks_vec.iter().copied().filter(|&r| r != 0).collect();
        shape.sort_unstable();
        let support: Vec<usize> = (0..ranks_vec.len()).filter(|&k| ranks_vec[k] != 0).collect();
        members.push((shape, support, ranks_vec, poly));
    }
    members.sort_by(|a, b| (&a.0, &a.1, &a.2).cmp(&(&b.0, &b.1, &b.2)));
    members.into_iter().map(|m| m.3).collect()
}

/// Lazy stream over the family, block by block.
#[derive(Debug, Clone)]
pub struct FamilyEnumerator {
    degree_cap: u32,
    denom_cap: i64,
    next_block: (u32, i64),
    buffer: std::vec::IntoIter<BiPoly>,
}

impl FamilyEnumerator {
    pub fn new(degree_cap: u32, denom_cap: i64) -> Self {
        FamilyEnumerator {
            degree_cap,
            denom_cap,
            next_block: (1, 1),
            buffer: Vec::new().into_iter(),
        }
    }
}

impl Iterator for FamilyEnumerator {
    type Item = BiPoly;

    fn next(&mut self) -> Option<BiPoly> {
        loop {
            if let Some(p) = self.buffer.next() {
                return Some(p);
            }
            let (d, q) = self.next_block;
            if d > self.degree_cap || d == 0 || self.denom_cap < 1 {
                return None;
            }
            self.next_block = if q < self.denom_cap { (d, q + 1) } else { (d + 1, 1) };
            self.buffer = block(d, q).into_iter();
        }
    }
}

/// The first `count` members of the family (fewer if the caps exhaust it).
pub fn enumerate_family(degree_cap: u32, denom_cap: i64, count: usize) -> Vec<BiPoly> {
    FamilyEnumerator::new(degree_cap, denom_cap).take(count).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{sample_bidisk, GridSpec};

    #[test]
    fn first_block_is_unit_monomials() {
        let f = enumerate_family(3, 4, 8);
        let shown: Vec<String> = f.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, ["1*z", "1*w", "1i*z", "1i*w", "-1*z", "-1*w", "-1i*z", "-1i*w"]);
    }

    #[test]
    fn half_sum_is_member_and_bad_ones_are_not() {
        let f = enumerate_family(1, 2, 10_000);
        let half = BiPoly::parse_record("[[1,0,1,2,0,1],[0,1,1,2,0,1]]").unwrap();
        assert!(f.contains(&half));
        let sum = BiPoly::parse_record("[[1,0,1,1,0,1],[0,1,1,1,0,1]]").unwrap();
        assert!(!f.contains(&sum));
        assert!(f.iter().all(|p| !p.is_constant()));
        let half_const = BiPoly::parse_record("[[0,0,1,2,0,1]]").unwrap();
        assert!(!f.contains(&half_const));
    }

    #[test]
    fn deterministic_injective_and_bounded() {
        let a = enumerate_family(2, 2, 10_000);
        let b = enumerate_family(2, 2, 10_000);
        assert_eq!(a, b);
        assert_eq!(a.len(), 300);
        assert_eq!(enumerate_family(2, 2, 250)[..], a[..250]);
        for (i, p) in a.iter().enumerate() {
            for q in &a[..i] {
                assert_ne!(p, q);
            }
        }
        let grid = sample_bidisk(&GridSpec::new(4, 8));
        for p in &a {
            assert!(p.l1_norm_at_most(Rational64::from_integer(1)));
            assert!(p.degree() <= 2 && p.denominator() <= 2);
            for x in grid.iter() {
                assert!(p.eval(x).norm() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn graded_by_degree_then_denominator() {
        let f = enumerate_family(2, 2, 2000);
        let keys: Vec<(u32, i64)> = f.iter().map(|p| (p.degree(), p.denominator())).collect();
        assert!(keys.windows(2).all(|w| w[0] <= w[1]));
        assert!(keys.contains(&(2, 1)));
    }
}
