//! Damped Newton refinement onto a level set `{f = target}` of a holomorphic
//! function of two variables.
//!
//! One equation in two unknowns: the step is the minimum-norm solution
//! `δ = -r·conj(∇f)/|∇f|²` of the linearization `∇f·δ = -r`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::Holomorphic;
use crate::geometry::{C2Point, BIDISK_SLACK};

/// Iterates may leave the bidisk temporarily, but not by more than this.
const EXCURSION_RADIUS: f64 = 1.5;
const MIN_DAMPING: f64 = 1.0 / 1024.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Polished {
    pub point: C2Point,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolishFailure {
    /// Value or gradient not representable along the way.
    NotFinite,
    /// Vanishing gradient.
    Critical,
    /// Damping could not reduce the residual.
    Stalled,
    /// Converged, but outside the closed bidisk.
    OutsideBidisk,
    /// Iteration budget exhausted.
    MaxIterations,
}

/// Polish `seed` onto `{f = target}` until `|f - target| <= tol` with the
/// point in the closed bidisk. A seed that already qualifies is returned
/// unchanged.
pub fn newton_polish<F: Holomorphic + ?Sized>(
    f: &F,
    target: Complex64,
    seed: C2Point,
    tol: f64,
    max_iter: usize,
) -> Result<Polished, PolishFailure> {
    let out = newton_converge(f, target, seed, tol, max_iter)?;
    if out.point.in_bidisk(BIDISK_SLACK) {
        Ok(out)
    } else {
        Err(PolishFailure::OutsideBidisk)
    }
}

/// As [`newton_polish`] without the final bidisk requirement.
pub fn newton_converge<F: Holomorphic + ?Sized>(
    f: &F,
    target: Complex64,
    seed: C2Point,
    tol: f64,
    max_iter: usize,
) -> Result<Polished, PolishFailure> {
    let mut pt = seed;
    let mut iterations = 0;
    loop {
        let (v, g) = f.value_and_gradient(&pt).ok_or(PolishFailure::NotFinite)?;
        let r = v - target;
        let res = r.norm();
        if res <= tol {
            return Ok(Polished {
                point: pt,
                residual: res,
                iterations,
            });
        }
        if iterations >= max_iter {
            return Err(PolishFailure::MaxIterations);
        }
        let gn = g[0].norm_sqr() + g[1].norm_sqr();
        if gn == 0.0 || !gn.is_finite() {
            return Err(PolishFailure::Critical);
        }
        let scale = -r / gn;
        let step = [scale * g[0].conj(), scale * g[1].conj()];
        pt = damped(f, target, pt, step, res).ok_or(PolishFailure::Stalled)?;
        iterations += 1;
    }
}

fn damped<F: Holomorphic + ?Sized>(
    f: &F,
    target: Complex64,
    pt: C2Point,
    step: [Complex64; 2],
    res: f64,
) -> Option<C2Point> {
    let mut lambda = 1.0;
    while lambda >= MIN_DAMPING {
        let cand = pt.offset(step[0] * lambda, step[1] * lambda);
        if cand.radius() <= EXCURSION_RADIUS {
            if let Some(v) = f.value(&cand) {
                if (v - target).norm() < res {
                    return Some(cand);
                }
            }
        }
        lambda *= 0.5;
    }
    None
}

/// Continue full Newton steps from a converged point while the residual keeps
/// decreasing and the point stays in the bidisk. Returns the best point seen.
pub fn polish_to_floor<F: Holomorphic + ?Sized>(
    f: &F,
    target: Complex64,
    start: Polished,
    max_extra: usize,
) -> Polished {
    let mut best = start;
    for _ in 0..max_extra {
        let Some((v, g)) = f.value_and_gradient(&best.point) else {
            break;
        };
        let r = v - target;
        let gn = g[0].norm_sqr() + g[1].norm_sqr();
        if r.norm() == 0.0 || gn == 0.0 || !gn.is_finite() {
            break;
        }
        let scale = -r / gn;
        let cand = best.point.offset(scale * g[0].conj(), scale * g[1].conj());
        let Some(cv) = f.value(&cand) else {
            break;
        };
        let cres = (cv - target).norm();
        if cres >= best.residual || !cand.in_bidisk(BIDISK_SLACK) {
            break;
        }
        best = Polished {
            point: cand,
            residual: cres,
            iterations: best.iterations + 1,
        };
    }
    best
}

/// Which coordinate a one-variable solve moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Free {
    Z,
    W,
}

/// Newton in one variable: solve `f = target` moving only the `free`
/// coordinate, starting from `seed`. The result may lie outside the bidisk;
/// callers decide what to do with it.
pub fn solve_one_coordinate<F: Holomorphic + ?Sized>(
    f: &F,
    target: Complex64,
    seed: C2Point,
    free: Free,
    tol: f64,
    max_iter: usize,
) -> Result<Polished, PolishFailure> {
    let mut pt = seed;
    let mut iterations = 0;
    loop {
        let (v, g) = f.value_and_gradient(&pt).ok_or(PolishFailure::NotFinite)?;
        let r = v - target;
        let res = r.norm();
        if res <= tol {
            return Ok(Polished {
                point: pt,
                residual: res,
                iterations,
            });
        }
        if iterations >= max_iter {
            return Err(PolishFailure::MaxIterations);
        }
        let d = match free {
            Free::Z => g[0],
            Free::W => g[1],
        };
        if d.norm_sqr() == 0.0 || !d.is_finite() {
            return Err(PolishFailure::Critical);
        }
        let delta = -r / d;
        let step = match free {
            Free::Z => [delta, Complex64::new(0.0, 0.0)],
            Free::W => [Complex64::new(0.0, 0.0), delta],
        };
        pt = damped(f, target, pt, step, res).ok_or(PolishFailure::Stalled)?;
        iterations += 1;
    }
}
