//! Maximum-modulus consistency between a sampled limit set `V` and its
//! boundary part `Y`: every polynomial should have `|p|_V = |p|_Y`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::geometry::{C2Point, PointCloud};
use crate::polynomials::{enumerate_family, monomials, ComplexPoly};

use super::report::{CheckRecord, VerificationReport};

pub const MAX_MODULUS_TOL: f64 = 1e-6;
pub const FAMILY_PREFIX: usize = 32;
pub const RANDOM_MEMBERS: usize = 32;
pub const RANDOM_DEGREE: u32 = 4;

/// A named polynomial of the battery.
#[derive(Debug, Clone, PartialEq)]
pub struct BatteryPoly {
    pub label: String,
    pub poly: ComplexPoly,
}

/// The first [`FAMILY_PREFIX`] family members followed by [`RANDOM_MEMBERS`]
/// seeded random polynomials of degree `<=` [`RANDOM_DEGREE`] with unit
/// coefficient `l1` norm.
pub fn battery(degree_cap: u32, denom_cap: i64, seed: u64) -> Vec<BatteryPoly> {
    let mut out: Vec<BatteryPoly> = enumerate_family(degree_cap, denom_cap, FAMILY_PREFIX)
        .into_iter()
        .enumerate()
        .map(|(i, p)| BatteryPoly {
            label: format!("family[{i}] {}", p.to_record_string()),
            poly: p.as_complex().clone(),
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = monomials(RANDOM_DEGREE).len();
    for i in 0..RANDOM_MEMBERS {
        let c: Vec<Complex64> = (0..m)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let p = ComplexPoly::from_coefficients(RANDOM_DEGREE, &c);
        let p = p.scaled(1.0 / p.l1_norm());
        out.push(BatteryPoly {
            label: format!("random[{i}]"),
            poly: p,
        });
    }
    out
}

fn sup_with_arg(p: &ComplexPoly, cloud: &PointCloud) -> (f64, Option<C2Point>) {
    cloud
        .points()
        .par_iter()
        .map(|x| (p.eval(x).norm(), Some(*x)))
        .reduce(
            || (f64::NEG_INFINITY, None),
            |a, b| if b.0 > a.0 { b } else { a },
        )
}

/// Record with margin `|p|_Y - |p|_V`; on failure the witnesses are the
/// points of `V` exceeding `|p|_Y + tol`, the maximizer first.
pub fn check_max_modulus(name: &str, p: &ComplexPoly, v: &PointCloud, y: &PointCloud, tol: f64) -> CheckRecord {
    let (sv, argv) = sup_with_arg(p, v);
    let (sy, _) = sup_with_arg(p, y);
    let rec = CheckRecord::new("max_modulus", None, sy - sv, tol)
        .with_values(vec![sv, sy])
        .with_note(name);
    let mut witnesses: Vec<C2Point> = argv.into_iter().collect();
    if !rec.pass {
        witnesses.extend(
            v.iter()
                .filter(|x| p.eval(x).norm() > sy + tol && Some(**x) != argv)
                .copied(),
        );
    }
    rec.with_witnesses(witnesses)
}

/// Runs [`check_max_modulus`] over every battery polynomial.
pub fn check_max_modulus_battery(polys: &[BatteryPoly], v: &PointCloud, y: &PointCloud, tol: f64) -> VerificationReport {
    VerificationReport {
        records: polys
            .iter()
            .map(|b| check_max_modulus(&b.label, &b.poly, v, y, tol))
            .collect(),
    }
}
