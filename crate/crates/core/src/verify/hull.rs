//! Search for a polynomial separating a target point from a sampled set,
//! i.e. a witness that the point lies outside the degree-limited
//! polynomially convex hull of the samples.
//!
//! Polynomials are normalized by `max(l1 norm of coefficients, sup_S |p|)`,
//! which equals the `l1` norm whenever `S` lies in the closed bidisk. The
//! objective is `|p(q)| - sup_S |p|` after normalization.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{C2Point, PointCloud};
use crate::polynomials::{monomials, ComplexPoly};

use super::fit::monomial_values;

/// Margins at or below this are treated as rounding noise.
pub const MARGIN_FLOOR: f64 = 1e-12;
/// Random starting polynomials drawn before local search.
pub const RANDOM_STARTS: usize = 64;
/// Starts refined by coordinate search.
pub const LOCAL_STARTS: usize = 4;
const STEP_START: f64 = 0.5;
const STEP_MIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub degree: u32,
    /// Normalized coefficients in the standard monomial order.
    pub coefficients: Vec<Complex64>,
    pub target: C2Point,
    pub value_at_target: f64,
    pub sup_on_cloud: f64,
    /// `value_at_target - sup_on_cloud`.
    pub margin: f64,
}

impl Certificate {
    pub fn poly(&self) -> ComplexPoly {
        ComplexPoly::from_coefficients(self.degree, &self.coefficients)
    }

    pub fn separates(&self) -> bool {
        self.margin > MARGIN_FLOOR
    }

    /// Human-readable polynomial, e.g. `(1+0i) w`.
    pub fn describe(&self) -> String {
        let terms: Vec<String> = monomials(self.degree)
            .into_iter()
            .zip(&self.coefficients)
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|((m, n), c)| {
                let mono = match (m, n) {
                    (0, 0) => String::new(),
                    _ => {
                        let zp = match m {
                            0 => String::new(),
                            1 => "z".into(),
                            _ => format!("z^{m}"),
                        };
                        let wp = match n {
                            0 => String::new(),
                            1 => "w".into(),
                            _ => format!("w^{n}"),
                        };
                        format!(" {zp}{wp}")
                    }
                };
                format!("({:+.6e}{:+.6e}i){mono}", c.re, c.im)
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// Outcome of a search; `best` is the best normalized polynomial seen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullSearch {
    pub best: Certificate,
    pub evaluations: usize,
}

impl HullSearch {
    pub fn certificate(&self) -> Option<&Certificate> {
        self.best.separates().then_some(&self.best)
    }
}

/// Monomial values on the cloud and at the target.
struct Problem {
    degree: u32,
    rows: Vec<Vec<Complex64>>,
    at_target: Vec<Complex64>,
    target: C2Point,
}

struct Scored {
    coeffs: Vec<Complex64>,
    objective: f64,
    value: f64,
    sup: f64,
    scale: f64,
}

impl Problem {
    fn new(q: &C2Point, s: &PointCloud, degree: u32) -> Self {
        Problem {
            degree,
            rows: s.points().par_iter().map(|p| monomial_values(p, degree)).collect(),
            at_target: monomial_values(q, degree),
            target: *q,
        }
    }

    fn score(&self, c: Vec<Complex64>) -> Scored {
        let dot = |row: &[Complex64]| row.iter().zip(&c).map(|(a, b)| a * b).sum::<Complex64>();
        let value = dot(&self.at_target).norm();
        let sup = self
            .rows
            .par_iter()
            .map(|r| dot(r).norm())
            .reduce(|| 0.0, f64::max);
        let l1: f64 = c.iter().map(|x| x.norm()).sum();
        let scale = l1.max(sup);
        let objective = if scale > 0.0 && scale.is_finite() { (value - sup) / scale } else { f64::NEG_INFINITY };
        Scored {
            coeffs: c,
            objective,
            value,
            sup,
            scale,
        }
    }

    fn certificate(&self, s: &Scored) -> Certificate {
        let k = if s.scale > 0.0 { 1.0 / s.scale } else { 1.0 };
        Certificate {
            degree: self.degree,
            coefficients: s.coeffs.iter().map(|c| c * k).collect(),
            target: self.target,
            value_at_target: s.value * k,
            sup_on_cloud: s.sup * k,
            margin: s.objective,
        }
    }
}

/// Every single monomial `z^m w^n`, `m + n <= degree`; returns the best.
pub fn exhaustive_monomial_certificate(q: &C2Point, s: &PointCloud, degree: u32) -> Result<Certificate> {
    if s.is_empty() {
        return Err(Error::EmptyCloud("hull search cloud"));
    }
    let prob = Problem::new(q, s, degree);
    let m = prob.at_target.len();
    let best = (0..m)
        .map(|k| prob.score(unit(m, k, Complex64::new(1.0, 0.0))))
        .reduce(|a, b| if b.objective > a.objective { b } else { a })
        .expect("at least the constant monomial");
    Ok(prob.certificate(&best))
}

fn unit(m: usize, k: usize, c: Complex64) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); m];
    v[k] = c;
    v
}

/// Monomials, then seeded random polynomials, then coordinate-wise local
/// search from the best few starts. `budget` bounds the number of
/// objective evaluations.
pub fn hull_search(q: &C2Point, s: &PointCloud, degree: u32, budget: usize, seed: u64) -> Result<HullSearch> {
    if s.is_empty() {
        return Err(Error::EmptyCloud("hull search cloud"));
    }
    if budget == 0 {
        return Err(Error::InvalidParameter("hull search budget must be positive".into()));
    }
    let prob = Problem::new(q, s, degree);
    let m = prob.at_target.len();
    let mut evals = 0usize;
    let mut pool: Vec<Scored> = Vec::new();
    for k in 0..m {
        if evals == budget {
            break;
        }
        pool.push(prob.score(unit(m, k, Complex64::new(1.0, 0.0))));
        evals += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_STARTS {
        if evals == budget {
            break;
        }
        let c = (0..m)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        pool.push(prob.score(c));
        evals += 1;
    }
    pool.sort_by(|a, b| b.objective.total_cmp(&a.objective));
    pool.truncate(LOCAL_STARTS);

    let dirs = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ];
    let share = (budget - evals) / pool.len().max(1);
    let mut refined = Vec::with_capacity(pool.len());
    for start in pool {
        let stop = evals + share;
        let mut cur = start;
        let mut step = STEP_START;
        'outer: while step >= STEP_MIN {
            let mut improved = false;
            for k in 0..m {
                let mut moves: Vec<Complex64> = dirs.iter().map(|d| cur.coeffs[k] + d * step).collect();
                if cur.coeffs[k].norm() > 0.0 {
                    moves.push(Complex64::new(0.0, 0.0));
                }
                for c in moves {
                    if evals >= stop {
                        break 'outer;
                    }
                    let mut trial = cur.coeffs.clone();
                    trial[k] = c;
                    let t = prob.score(trial);
                    evals += 1;
                    if t.objective > cur.objective {
                        cur = t;
                        improved = true;
                    }
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        refined.push(cur);
    }
    let best = refined
        .into_iter()
        .reduce(|a, b| if b.objective > a.objective { b } else { a })
        .expect("non-empty pool");
    Ok(HullSearch {
        best: prob.certificate(&best),
        evaluations: evals,
    })
}

/// [`hull_search`] reduced to its verdict: `Some` iff a separating
/// polynomial was found.
pub fn search_hull_certificate(
    q: &C2Point,
    s: &PointCloud,
    degree: u32,
    budget: usize,
    seed: u64,
) -> Result<Option<Certificate>> {
    Ok(hull_search(q, s, degree, budget, seed)?.certificate().cloned())
}
