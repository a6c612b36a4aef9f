//! Extending a variety sample to the boundary of the bidisk.
//!
//! Interior points are continued along the curve in the direction of
//! steepest increase of `|z|² + |w|²` until they leave the bidisk, and the
//! exit is located on a face. From each new exit the intersection of the
//! variety with the faces `{|z| = 1}` and `{|w| = 1}` is traced as a curve
//! parametrized by the angle of the coordinate lying on the circle,
//! switching faces at corners of the torus.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::Holomorphic;
use crate::construction::{newton_converge, solve_one_coordinate, Free, StageFunction};
use crate::geometry::{dedup_points, poly_metric, C2Point, GridSpec, SpatialHash, BIDISK_SLACK};

use super::sample::VarietySample;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const CORRECT_ITERS: usize = 30;
const MIN_STEP: f64 = 1e-10;
const LAND_GAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefineOptions {
    /// Predictor-corrector steps per continuation; `0` leaves the sample
    /// unchanged.
    pub steps: usize,
    pub h_continue: f64,
    /// Largest coordinate change between consecutive traced boundary points.
    pub h_trace: f64,
    pub max_trace_steps: usize,
    /// Steps of the inward sweeps started from the traced boundary.
    pub inward_steps: usize,
    pub tol: f64,
    /// Grid whose nodes seed direct searches on the two faces.
    pub face_grid: GridSpec,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            steps: 400,
            h_continue: 0.05,
            h_trace: 0.01,
            max_trace_steps: 40_000,
            inward_steps: 40,
            tol: 1e-10,
            face_grid: GridSpec::new(6, 16),
        }
    }
}

fn tangent<F: Holomorphic + ?Sized>(f: &F, x: &C2Point) -> Option<[Complex64; 2]> {
    let (_, g) = f.value_and_gradient(x)?;
    let n = (g[0].norm_sqr() + g[1].norm_sqr()).sqrt();
    (n > 0.0 && n.is_finite()).then(|| [g[1] / n, -g[0] / n])
}

/// Unit multiplier of the tangent that changes `|z|² + |w|²` fastest, in
/// the direction of `sign`.
fn ascent_phase(x: &C2Point, t: &[Complex64; 2], sign: f64) -> Option<Complex64> {
    let c = x.z.conj() * t[0] + x.w.conj() * t[1];
    let n = c.norm();
    (n > 1e-14).then(|| sign * c.conj() / n)
}

struct Walk {
    path: Vec<C2Point>,
    landing: Option<C2Point>,
}

fn continue_to_boundary<F: Holomorphic + ?Sized>(f: &F, seed: C2Point, phase0: Complex64, opts: &RefineOptions) -> Walk {
    walk(f, seed, phase0, 1.0, opts.steps, opts)
}

/// Predictor-corrector walk along `{F = 1}`. Outward walks (`sign > 0`)
/// end with a landing on the boundary; inward walks stop at the step budget
/// or on leaving the bidisk.
fn walk<F: Holomorphic + ?Sized>(
    f: &F,
    seed: C2Point,
    phase0: Complex64,
    sign: f64,
    steps: usize,
    opts: &RefineOptions,
) -> Walk {
    let mut path = Vec::new();
    if sign > 0.0 && seed.radius() >= 1.0 - BIDISK_SLACK {
        return Walk {
            path,
            landing: Some(seed),
        };
    }
    let mut x = seed;
    let mut phase = phase0;
    let mut h = opts.h_continue;
    for step in 0..steps {
        let Some(t) = tangent(f, &x) else {
            break;
        };
        if step > 0 || sign < 0.0 {
            if let Some(p) = ascent_phase(&x, &t, sign) {
                phase = p;
            }
        }
        loop {
            if h < MIN_STEP {
                return Walk { path, landing: None };
            }
            let pred = x.offset(phase * t[0] * h, phase * t[1] * h);
            match newton_converge(f, ONE, pred, opts.tol, CORRECT_ITERS) {
                Ok(p) if poly_metric(&p.point, &pred) <= h => {
                    if p.point.in_bidisk(BIDISK_SLACK) {
                        x = p.point;
                        path.push(x);
                        h = (h * 1.5).min(opts.h_continue);
                        break;
                    }
                    if sign < 0.0 {
                        return Walk { path, landing: None };
                    }
                    return Walk {
                        landing: land(f, x, p.point, opts.tol),
                        path,
                    };
                }
                _ => h *= 0.5,
            }
        }
    }
    Walk { path, landing: None }
}

/// A point of `{F = 1}` on the boundary between an inside point and an
/// outside point of the same branch.
fn land<F: Holomorphic + ?Sized>(f: &F, inside: C2Point, outside: C2Point, tol: f64) -> Option<C2Point> {
    let (mut a, mut b) = (inside, outside);
    for _ in 0..80 {
        let gap = poly_metric(&a, &b);
        if gap < LAND_GAP {
            break;
        }
        let mid = C2Point::new((a.z + b.z) * 0.5, (a.w + b.w) * 0.5);
        let m = newton_converge(f, ONE, mid, tol, CORRECT_ITERS).ok()?.point;
        if poly_metric(&m, &mid) > gap {
            return None;
        }
        if m.in_bidisk(BIDISK_SLACK) {
            a = m;
        } else {
            b = m;
        }
    }
    project(f, &b, tol).or_else(|| project(f, &a, tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Face {
    /// `|z| = 1`, `w` free.
    Z,
    /// `|w| = 1`, `z` free.
    W,
}

impl Face {
    fn of(x: &C2Point) -> Face {
        if x.z.norm() >= x.w.norm() {
            Face::Z
        } else {
            Face::W
        }
    }

    fn other(self) -> Face {
        match self {
            Face::Z => Face::W,
            Face::W => Face::Z,
        }
    }

    fn free_axis(self) -> Free {
        match self {
            Face::Z => Free::W,
            Face::W => Free::Z,
        }
    }

    fn fixed(self, x: &C2Point) -> Complex64 {
        match self {
            Face::Z => x.z,
            Face::W => x.w,
        }
    }

    fn free(self, x: &C2Point) -> Complex64 {
        match self {
            Face::Z => x.w,
            Face::W => x.z,
        }
    }

    fn point(self, angle: f64, free: Complex64) -> C2Point {
        let c = Complex64::from_polar(1.0, angle);
        match self {
            Face::Z => C2Point::new(c, free),
            Face::W => C2Point::new(free, c),
        }
    }

    /// `d(free)/d(angle)` along the curve.
    fn rate<F: Holomorphic + ?Sized>(self, f: &F, x: &C2Point) -> Option<Complex64> {
        let (_, g) = f.value_and_gradient(x)?;
        let (g_fixed, g_free) = match self {
            Face::Z => (g[0], g[1]),
            Face::W => (g[1], g[0]),
        };
        let r = -g_fixed * Complex64::i() * self.fixed(x) / g_free;
        r.is_finite().then_some(r)
    }

    fn solve<F: Holomorphic + ?Sized>(self, f: &F, angle: f64, seed: Complex64, tol: f64) -> Option<C2Point> {
        solve_one_coordinate(f, ONE, self.point(angle, seed), self.free_axis(), tol, CORRECT_ITERS)
            .ok()
            .map(|p| p.point)
    }
}

/// Moves the dominant coordinate of `x` onto the unit circle and solves for
/// the other one.
fn project<F: Holomorphic + ?Sized>(f: &F, x: &C2Point, tol: f64) -> Option<C2Point> {
    let first = Face::of(x);
    for face in [first, first.other()] {
        let angle = face.fixed(x).arg();
        if let Some(p) = face.solve(f, angle, face.free(x), tol) {
            if p.in_bidisk(BIDISK_SLACK) && poly_metric(&p, x) < 0.05 {
                return Some(p);
            }
        }
    }
    None
}

struct March {
    points: Vec<C2Point>,
    closed: bool,
}

fn march<F: Holomorphic + ?Sized>(f: &F, start: C2Point, dir0: f64, opts: &RefineOptions) -> March {
    let h = opts.h_trace;
    let mut face = Face::of(&start);
    let mut angle = face.fixed(&start).arg();
    let mut x = start;
    let mut dir = dir0;
    let mut points = Vec::new();
    let mut travelled = 0.0;
    let mut corner_run = 0;
    for _ in 0..opts.max_trace_steps {
        let Some(rate) = face.rate(f, &x) else {
            break;
        };
        let nominal = h / rate.norm().max(1.0);
        let u = face.free(&x);
        let mut k = 1.0;
        let next = loop {
            if k * nominal < MIN_STEP {
                break None;
            }
            let dt = dir * nominal * k;
            let pred = u + rate * dt;
            match face.solve(f, angle + dt, pred, opts.tol) {
                Some(p) if (face.free(&p) - pred).norm() <= 0.5 * h => break Some((dt, p)),
                _ => k *= 0.5,
            }
        };
        let Some((dt, p)) = next else {
            break;
        };
        if face.free(&p).norm() <= 1.0 + BIDISK_SLACK {
            travelled += poly_metric(&p, &x);
            x = p;
            angle += dt;
            points.push(x);
            corner_run = 0;
            if travelled > 4.0 * h && poly_metric(&x, &start) < 1.5 * h {
                return March { points, closed: true };
            }
            continue;
        }
        // The free coordinate left the unit disk: find the corner by
        // bisection in the angle and continue on the other face.
        let (mut lo, mut hi) = (0.0, dt);
        let mut u_lo = u;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            match face.solve(f, angle + mid, u_lo, opts.tol) {
                Some(q) if face.free(&q).norm() > 1.0 + BIDISK_SLACK => hi = mid,
                Some(q) => {
                    lo = mid;
                    u_lo = face.free(&q);
                }
                None => break,
            }
        }
        let corner = face.point(angle + lo, u_lo);
        points.push(corner);
        corner_run += 1;
        if corner_run > 2 {
            break;
        }
        let new_face = face.other();
        let new_angle = u_lo.arg();
        let Some(y) = new_face.solve(f, new_angle, face.fixed(&corner), opts.tol) else {
            break;
        };
        let Some(r) = new_face.rate(f, &y) else {
            break;
        };
        let outward = (new_face.free(&y).conj() * r).re;
        dir = if outward > 0.0 { -1.0 } else { 1.0 };
        travelled += poly_metric(&y, &x);
        face = new_face;
        angle = new_angle;
        x = y;
    }
    March { points, closed: false }
}

/// Samples of the boundary curve through `start`, which must lie on a face.
fn trace_curve<F: Holomorphic + ?Sized>(f: &F, start: C2Point, opts: &RefineOptions) -> Vec<C2Point> {
    let mut pts = vec![start];
    let fwd = march(f, start, 1.0, opts);
    pts.extend(fwd.points);
    if !fwd.closed {
        pts.extend(march(f, start, -1.0, opts).points);
    }
    pts
}

/// Solutions found directly on the faces from the nodes of `grid`.
fn face_seeds<F: Holomorphic + ?Sized>(f: &F, grid: &GridSpec, tol: f64) -> Vec<C2Point> {
    let nodes = grid.disk_nodes();
    let angles = grid.angles();
    let jobs: Vec<(Face, f64, Complex64)> = [Face::Z, Face::W]
        .into_iter()
        .flat_map(|face| {
            let nodes = &nodes;
            angles.iter().flat_map(move |&a| nodes.iter().map(move |&u| (face, a, u)))
        })
        .collect();
    jobs.par_iter()
        .filter_map(|&(face, a, u)| {
            let v = f.value(&face.point(a, u))?;
            if (v - ONE).norm() >= 0.5 {
                return None;
            }
            let p = face.solve(f, a, u, tol)?;
            p.in_bidisk(BIDISK_SLACK).then_some(p)
        })
        .collect()
}

/// Continuation from every sample point toward the boundary, followed by
/// tracing of every boundary curve reached. The result contains the input
/// sample, so the reach never decreases.
pub fn refine_toward_boundary(f: &StageFunction, sample: &VarietySample, opts: &RefineOptions) -> VarietySample {
    if opts.steps == 0 {
        return sample.clone();
    }
    let phases = [ONE, Complex64::i(), -ONE, -Complex64::i()];
    let jobs: Vec<(C2Point, Complex64)> = sample
        .cloud
        .iter()
        .flat_map(|&p| phases.iter().map(move |&ph| (p, ph)))
        .collect();
    let walks: Vec<Walk> = jobs
        .par_iter()
        .map(|&(p, ph)| continue_to_boundary(f, p, ph, opts))
        .collect();

    let mut landings: Vec<C2Point> = walks.iter().filter_map(|w| w.landing).collect();
    landings.extend(face_seeds(f, &opts.face_grid, opts.tol));

    let h = opts.h_trace;
    let mut traced = SpatialHash::new(2.0 * h);
    let mut boundary: Vec<C2Point> = Vec::new();
    for l in landings {
        if traced.any_within(&l, 2.0 * h) {
            continue;
        }
        for p in trace_curve(f, l, opts) {
            traced.insert(p);
            boundary.push(p);
        }
    }

    let stride = ((opts.h_continue / h).round() as usize).max(1);
    let sweeps: Vec<Walk> = boundary
        .par_iter()
        .step_by(stride)
        .map(|&p| walk(f, p, ONE, -1.0, opts.inward_steps, opts))
        .collect();

    let mut interior: Vec<C2Point> = sample.cloud.points().to_vec();
    for w in walks.iter().chain(&sweeps) {
        interior.extend(&w.path);
    }
    let mut all = dedup_points(&interior, opts.h_continue / 2.0);
    all.extend(dedup_points(&boundary, h / 4.0));
    VarietySample::assemble(f, all, sample.cloud.stage(), opts.tol)
}
