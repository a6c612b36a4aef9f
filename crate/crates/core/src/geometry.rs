//! Points of C², samples of compact subsets of the closed bidisk, and the
//! Hausdorff metric between such samples.
//!
//! All distances use the polydisk metric `max(|Δz|, |Δw|)`, whose unit ball
//! is the bidisk itself.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod kdtree;

/// Slack allowed when deciding membership of floating-point points in the
/// closed bidisk.
pub const BIDISK_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct C2Point {
    pub z: Complex64,
    pub w: Complex64,
}

impl C2Point {
    pub const ORIGIN: C2Point = C2Point {
        z: Complex64::new(0.0, 0.0),
        w: Complex64::new(0.0, 0.0),
    };

    pub fn new(z: Complex64, w: Complex64) -> Self {
        C2Point { z, w }
    }

    pub fn real(z: f64, w: f64) -> Self {
        C2Point::new(Complex64::new(z, 0.0), Complex64::new(w, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.z.is_finite() && self.w.is_finite()
    }

    /// `max(|z|, |w|)`: the polydisk norm.
    pub fn radius(&self) -> f64 {
        self.z.norm().max(self.w.norm())
    }

    pub fn in_bidisk(&self, slack: f64) -> bool {
        self.radius() <= 1.0 + slack
    }

    pub fn offset(&self, dz: Complex64, dw: Complex64) -> Self {
        C2Point::new(self.z + dz, self.w + dw)
    }
}

impl fmt::Display for C2Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}{:+}i, {}{:+}i)",
            self.z.re, self.z.im, self.w.re, self.w.im
        )
    }
}

/// `max(|p.z - q.z|, |p.w - q.w|)`.
pub fn poly_metric(p: &C2Point, q: &C2Point) -> f64 {
    (p.z - q.z).norm().max((p.w - q.w).norm())
}

/// Role of a cloud within a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CloudTag {
    K,
    V,
    Y,
    LWitness,
    MWitness,
    Boundary,
    HullCandidate,
}

impl CloudTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CloudTag::K => "K",
            CloudTag::V => "V",
            CloudTag::Y => "Y",
            CloudTag::LWitness => "L",
            CloudTag::MWitness => "M",
            CloudTag::Boundary => "boundary",
            CloudTag::HullCandidate => "hull",
        }
    }
}

impl fmt::Display for CloudTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CloudTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "K" => CloudTag::K,
            "V" => CloudTag::V,
            "Y" => CloudTag::Y,
            "L" => CloudTag::LWitness,
            "M" => CloudTag::MWitness,
            "boundary" => CloudTag::Boundary,
            "hull" => CloudTag::HullCandidate,
            other => return Err(Error::parse("cloud tag", format!("unknown tag {other:?}"))),
        })
    }
}

/// A finite, tagged sample of a compact subset of the closed bidisk.
///
/// Clouds are immutable: every refinement produces a new cloud.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<C2Point>,
    tag: CloudTag,
    stage: Option<usize>,
    tol: f64,
}

impl PointCloud {
    /// Builds a cloud, rejecting non-finite points and points farther than
    /// `tol` outside the closed bidisk.
    pub fn new(points: Vec<C2Point>, tag: CloudTag, stage: Option<usize>, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidCloud(format!("tolerance must be positive, got {tol}")));
        }
        for (i, p) in points.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::InvalidCloud(format!("point {i} is not finite")));
            }
            if p.radius() > 1.0 + tol {
                return Err(Error::InvalidCloud(format!(
                    "point {i} = {p} lies outside the bidisk (radius {})",
                    p.radius()
                )));
            }
        }
        Ok(PointCloud {
            points,
            tag,
            stage,
            tol,
        })
    }

    pub fn empty(tag: CloudTag, stage: Option<usize>, tol: f64) -> Self {
        PointCloud {
            points: Vec::new(),
            tag,
            stage,
            tol,
        }
    }

    pub fn points(&self) -> &[C2Point] {
        &self.points
    }

    pub fn tag(&self) -> CloudTag {
        self.tag
    }

    pub fn stage(&self) -> Option<usize> {
        self.stage
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, C2Point> {
        self.points.iter()
    }

    pub fn retagged(&self, tag: CloudTag, stage: Option<usize>) -> Self {
        PointCloud {
            points: self.points.clone(),
            tag,
            stage,
            tol: self.tol,
        }
    }

    /// The sub-cloud of points satisfying `keep`, with a new tag.
    pub fn filtered(&self, tag: CloudTag, keep: impl Fn(&C2Point) -> bool) -> Self {
        PointCloud {
            points: self.points.iter().copied().filter(|p| keep(p)).collect(),
            tag,
            stage: self.stage,
            tol: self.tol,
        }
    }

    /// Largest polydisk radius among the points (0 for an empty cloud).
    pub fn reach(&self) -> f64 {
        self.points.iter().map(C2Point::radius).fold(0.0, f64::max)
    }

    pub fn contains_exact(&self, q: &C2Point) -> bool {
        self.points.iter().any(|p| p == q)
    }

    pub(crate) fn require_non_empty(&self, what: &'static str) -> Result<()> {
        if self.points.is_empty() {
            Err(Error::EmptyCloud(what))
        } else {
            Ok(())
        }
    }
}

/// Bucketed points for "is anything within `radius`" queries.
#[derive(Debug, Clone, Default)]
pub struct SpatialHash {
    cell: f64,
    buckets: HashMap<[i64; 4], Vec<C2Point>>,
}

impl SpatialHash {
    /// Queries are exact for radii up to `cell`.
    pub fn new(cell: f64) -> Self {
        assert!(cell > 0.0, "cell size must be positive");
        SpatialHash {
            cell,
            buckets: HashMap::new(),
        }
    }

    fn key(&self, p: &C2Point) -> [i64; 4] {
        let c = self.cell;
        [
            (p.z.re / c).floor() as i64,
            (p.z.im / c).floor() as i64,
            (p.w.re / c).floor() as i64,
            (p.w.im / c).floor() as i64,
        ]
    }

    pub fn insert(&mut self, p: C2Point) {
        let k = self.key(&p);
        self.buckets.entry(k).or_default().push(p);
    }

    /// Whether some stored point lies within `radius <= cell` of `p`.
    pub fn any_within(&self, p: &C2Point, radius: f64) -> bool {
        debug_assert!(radius <= self.cell);
        let c = self.key(p);
        for d0 in -1..=1 {
            for d1 in -1..=1 {
                for d2 in -1..=1 {
                    for d3 in -1..=1 {
                        let key = [c[0] + d0, c[1] + d1, c[2] + d2, c[3] + d3];
                        if let Some(ids) = self.buckets.get(&key) {
                            if ids.iter().any(|q| poly_metric(q, p) <= radius) {
                                return true;
                            }
                        }
                    }
                }
            }
        }
        false
    }
}

/// Greedy thinning: a point is kept when it is farther than `radius` from
/// every point kept before it. Order of the survivors follows the input.
pub fn dedup_points(points: &[C2Point], radius: f64) -> Vec<C2Point> {
    if radius <= 0.0 {
        return points.to_vec();
    }
    let mut index = SpatialHash::new(radius);
    let mut kept = Vec::new();
    for p in points {
        if !index.any_within(p, radius) {
            index.insert(*p);
            kept.push(*p);
        }
    }
    kept
}

/// `sup_{a in A} dist(a, B)` under the polydisk metric.
pub fn directed_hausdorff(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    a.require_non_empty("directed Hausdorff source")?;
    b.require_non_empty("directed Hausdorff target")?;
    let tree = kdtree::KdTree::new(b.points());
    Ok(a.points()
        .par_iter()
        .map(|p| tree.nearest_distance(p))
        .reduce(|| 0.0, f64::max))
}

/// Hausdorff distance between two non-empty clouds.
///
/// Nearest neighbours come from an exact k-d tree search and the reductions
/// are `max`/`min`, so the result is bit-identical to the double loop.
pub fn hausdorff(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

/// Polar product grid on each factor of the bidisk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_radii: usize,
    pub n_angles: usize,
    pub includes_boundary: bool,
}

impl GridSpec {
    pub fn new(n_radii: usize, n_angles: usize) -> Self {
        GridSpec {
            n_radii,
            n_angles,
            includes_boundary: true,
        }
    }

    pub fn points_per_disk(&self) -> usize {
        self.n_radii * self.n_angles
    }

    pub fn total_points(&self) -> usize {
        self.points_per_disk() * self.points_per_disk()
    }

    pub fn validate(&self, budget: usize) -> Result<()> {
        if self.n_angles == 0 || self.n_radii == 0 {
            return Err(Error::InvalidParameter("grid must have at least one radius and angle".into()));
        }
        if self.includes_boundary && self.n_radii < 2 {
            return Err(Error::InvalidParameter(
                "a grid that includes the boundary needs at least two radii".into(),
            ));
        }
        if self.total_points() > budget {
            return Err(Error::Budget(format!(
                "grid has {} points, budget is {budget}",
                self.total_points()
            )));
        }
        Ok(())
    }

    pub fn radii(&self) -> Vec<f64> {
        if self.includes_boundary {
            let last = (self.n_radii - 1).max(1) as f64;
            (0..self.n_radii).map(|k| k as f64 / last).collect()
        } else {
            (0..self.n_radii).map(|k| k as f64 / self.n_radii as f64).collect()
        }
    }

    pub fn angles(&self) -> Vec<f64> {
        (0..self.n_angles)
            .map(|m| TAU * m as f64 / self.n_angles as f64)
            .collect()
    }

    /// Nodes of one disk factor, ordered by (radius, angle).
    pub fn disk_nodes(&self) -> Vec<Complex64> {
        let angles = self.angles();
        self.radii()
            .into_iter()
            .flat_map(|r| angles.iter().map(move |&t| Complex64::from_polar(r, t)))
            .collect()
    }

    /// Radial spacing of the grid.
    pub fn radial_step(&self) -> f64 {
        let r = self.radii();
        if r.len() < 2 {
            1.0
        } else {
            r[1] - r[0]
        }
    }
}

/// The product grid `nodes × nodes`, `z` varying slowest.
pub fn sample_bidisk(grid: &GridSpec) -> PointCloud {
    let nodes = grid.disk_nodes();
    let points = nodes
        .iter()
        .flat_map(|&z| nodes.iter().map(move |&w| C2Point::new(z, w)))
        .collect();
    PointCloud {
        points,
        tag: CloudTag::HullCandidate,
        stage: None,
        tol: BIDISK_SLACK,
    }
}

fn check_shell_radii(r: f64, s: f64) -> Result<()> {
    if !(r > 0.0 && r <= 1.0 && s > 0.0 && s <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "shell radii must lie in (0, 1], got r={r}, s={s}"
        )));
    }
    Ok(())
}

/// Samples of the boundary of `B_{r,s} = {|z| <= r, |w| <= s}`: the face
/// `{|z| = r} × {|w| <= s}` followed by `{|z| < r} × {|w| = s}`.
pub fn sample_boundary(grid: &GridSpec, r: f64, s: f64) -> Result<PointCloud> {
    check_shell_radii(r, s)?;
    let angles = grid.angles();
    let radii = grid.radii();
    let nodes = grid.disk_nodes();
    let mut points = Vec::new();
    for &t in &angles {
        let z = Complex64::from_polar(r, t);
        for &w in &nodes {
            points.push(C2Point::new(z, w * s));
        }
    }
    let top = radii.len() - 1;
    for (k, &rad) in radii.iter().enumerate() {
        if grid.includes_boundary && k == top {
            continue;
        }
        for &t in &angles {
            let z = Complex64::from_polar(rad * r, t);
            for &u in &angles {
                points.push(C2Point::new(z, Complex64::from_polar(s, u)));
            }
        }
    }
    PointCloud::new(points, CloudTag::Boundary, None, BIDISK_SLACK)
}

/// Polydisk distance from `p` to the boundary of `B_{r,s}`.
///
/// Inside the polydisk this is `min(r - |z|, s - |w|)`, the closeness to the
/// nearer face; outside it is the amount by which `p` overshoots.
pub fn boundary_distance(p: &C2Point, r: f64, s: f64) -> f64 {
    let dz = r - p.z.norm();
    let dw = s - p.w.norm();
    if dz >= 0.0 && dw >= 0.0 {
        dz.min(dw)
    } else {
        (-dz).max(-dw)
    }
}

/// Result of a greedy Cauchy-subsequence selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauchySelection {
    pub indices: Vec<usize>,
    /// Hausdorff distances between successive selected clouds.
    pub gaps: Vec<f64>,
    /// True when the final gap exceeds the requested target.
    pub best_effort: bool,
}

/// Walks the sequence once, keeping cloud `k` whenever its distance to the
/// last kept cloud does not exceed the previous kept gap. Gaps along the
/// selection are therefore non-increasing.
pub fn select_cauchy_subsequence(clouds: &[PointCloud], target_gap: f64) -> Result<CauchySelection> {
    if clouds.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least two clouds for a subsequence, got {}",
            clouds.len()
        )));
    }
    let mut indices = vec![0];
    let mut gaps: Vec<f64> = Vec::new();
    for k in 1..clouds.len() {
        let last = *indices.last().expect("selection starts non-empty");
        let d = hausdorff(&clouds[last], &clouds[k])?;
        if gaps.last().is_none_or(|&g| d <= g) {
            indices.push(k);
            gaps.push(d);
        }
    }
    let best_effort = gaps.last().is_some_and(|&g| g > target_gap);
    Ok(CauchySelection {
        indices,
        gaps,
        best_effort,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    fn cloud(points: Vec<C2Point>) -> PointCloud {
        PointCloud::new(points, CloudTag::V, None, 1e-9).unwrap()
    }

    #[test]
    fn metric_examples() {
        let o = C2Point::ORIGIN;
        assert_eq!(poly_metric(&o, &o), 0.0);
        assert_eq!(poly_metric(&o, &C2Point::real(1.0, 0.0)), 1.0);
        let p = C2Point::real(1.0, 0.0);
        let q = C2Point::new(C::new(0.0, 0.0), C::new(0.0, 1.0));
        assert_eq!(poly_metric(&p, &q), 1.0);
    }

    #[test]
    fn hausdorff_one_point_augmentation() {
        let eps = 0.037;
        let a = cloud(vec![C2Point::ORIGIN]);
        let b = cloud(vec![C2Point::ORIGIN, C2Point::real(eps, 0.0)]);
        assert_eq!(hausdorff(&a, &b).unwrap(), eps);
        assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn hausdorff_rejects_empty() {
        let a = cloud(vec![C2Point::ORIGIN]);
        let e = PointCloud::empty(CloudTag::V, None, 1e-9);
        assert!(matches!(hausdorff(&a, &e), Err(Error::EmptyCloud(_))));
    }

    #[test]
    fn cloud_rejects_outside_and_nan() {
        assert!(PointCloud::new(vec![C2Point::real(1.1, 0.0)], CloudTag::V, None, 1e-3).is_err());
        assert!(PointCloud::new(vec![C2Point::real(f64::NAN, 0.0)], CloudTag::V, None, 1e-3).is_err());
        assert!(PointCloud::new(vec![C2Point::real(1.0005, 0.0)], CloudTag::V, None, 1e-3).is_ok());
    }

    #[test]
    fn smallest_grid() {
        let g = GridSpec::new(2, 1);
        let c = sample_bidisk(&g);
        let pts: Vec<(f64, f64)> = c.iter().map(|p| (p.z.re, p.w.re)).collect();
        assert_eq!(pts, vec![(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)]);
        assert!(c.iter().all(|p| p.z.im == 0.0 && p.w.im == 0.0));
    }

    #[test]
    fn grid_count_and_containment() {
        let g = GridSpec::new(3, 4);
        let c = sample_bidisk(&g);
        assert_eq!(c.len(), 144);
        assert!(c.iter().all(|p| p.radius() <= 1.0 + 1e-15));
        assert_eq!(c, sample_bidisk(&g));
    }

    #[test]
    fn grid_budget() {
        assert!(matches!(GridSpec::new(6, 8).validate(1000), Err(Error::Budget(_))));
        assert!(GridSpec::new(6, 8).validate(2304).is_ok());
    }

    #[test]
    fn boundary_samples() {
        let g = GridSpec::new(3, 4);
        let c = sample_boundary(&g, 1.0, 1.0).unwrap();
        assert!(c.iter().all(|p| (p.radius() - 1.0).abs() < 1e-15));
        let c = sample_boundary(&g, 0.5, 0.75).unwrap();
        assert!(c.contains_exact(&C2Point::real(0.5, 0.0)));
        let c = sample_boundary(&g, 1.0, 0.25).unwrap();
        assert!(c.contains_exact(&C2Point::real(1.0, 0.25)));
        assert!(sample_boundary(&g, 0.0, 0.5).is_err());
        assert!(sample_boundary(&g, 0.5, 1.5).is_err());
    }

    #[test]
    fn boundary_distance_examples() {
        assert_eq!(boundary_distance(&C2Point::real(1.0, 0.0), 1.0, 1.0), 0.0);
        assert_eq!(boundary_distance(&C2Point::ORIGIN, 1.0, 1.0), 1.0);
        assert_eq!(boundary_distance(&C2Point::real(0.5, 0.25), 1.0, 0.25), 0.0);
        assert!((boundary_distance(&C2Point::real(0.5, 0.5), 1.0, 0.25) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn cauchy_constant_sequence() {
        let a = cloud(vec![C2Point::ORIGIN, C2Point::real(0.5, 0.5)]);
        let sel = select_cauchy_subsequence(&[a.clone(), a.clone(), a], 0.1).unwrap();
        assert_eq!(sel.indices, vec![0, 1, 2]);
        assert_eq!(sel.gaps, vec![0.0, 0.0]);
        assert!(!sel.best_effort);
    }

    #[test]
    fn cauchy_shrinking_gaps() {
        let mk = |x: f64| cloud(vec![C2Point::real(x, 0.0)]);
        let clouds = [mk(0.0), mk(1.0), mk(0.5), mk(0.75)];
        let sel = select_cauchy_subsequence(&clouds, 0.3).unwrap();
        assert_eq!(sel.indices, vec![0, 1, 2, 3]);
        assert_eq!(sel.gaps, vec![1.0, 0.5, 0.25]);
        assert!(!sel.best_effort);
    }

    #[test]
    fn cauchy_oscillation_is_best_effort() {
        let a = cloud(vec![C2Point::real(0.0, 0.0)]);
        let b = cloud(vec![C2Point::real(1.0, 0.0)]);
        let sel = select_cauchy_subsequence(&[a.clone(), b.clone(), a, b], 0.1).unwrap();
        assert!(sel.best_effort);
        assert!(sel.gaps.windows(2).all(|w| w[1] <= w[0]));
        assert!(select_cauchy_subsequence(&sel_one(), 0.1).is_err());
    }

    fn sel_one() -> Vec<PointCloud> {
        vec![cloud(vec![C2Point::ORIGIN])]
    }

    #[test]
    fn dedup_keeps_first_of_cluster() {
        let pts = vec![
            C2Point::real(0.0, 0.0),
            C2Point::real(0.01, 0.0),
            C2Point::real(0.5, 0.0),
            C2Point::real(0.505, 0.0),
        ];
        let kept = dedup_points(&pts, 0.05);
        assert_eq!(kept, vec![pts[0], pts[2]]);
    }

    #[test]
    fn tree_matches_double_loop() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut pick = |n: usize, spread: f64| -> Vec<C2Point> {
            (0..n)
                .map(|_| {
                    let mut c = || C::new(rng.random_range(-spread..spread), rng.random_range(-spread..spread));
                    C2Point::new(c(), c())
                })
                .collect()
        };
        for (n, m, spread) in [(1, 1, 0.5), (300, 7, 0.7), (50, 900, 0.7), (400, 400, 0.05)] {
            let a = cloud(pick(n, spread));
            let b = cloud(pick(m, 0.7));
            let brute = a
                .iter()
                .map(|p| b.iter().map(|q| poly_metric(p, q)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max);
            assert_eq!(directed_hausdorff(&a, &b).unwrap(), brute);
        }
    }
}
