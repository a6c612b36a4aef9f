use num_complex::Complex64;
use rayon::prelude::*;

use crate::analytic::Holomorphic;
use crate::geometry::{dedup_points, sample_bidisk, C2Point, CloudTag, GridSpec, PointCloud};
use crate::polynomials::BiPoly;

use super::newton::{newton_polish, polish_to_floor, Polished};

/// Grid points with `|f - target|` below this seed the polish.
pub const SEED_THRESHOLD: f64 = 0.5;
pub const POLISH_MAX_ITER: usize = 60;
const FLOOR_MAX_EXTRA: usize = 8;

/// Seeds from the grid filter, polished onto `{f = target}` and then pushed
/// to the residual floor. Deduplicated at half the radial grid step; order
/// follows the grid.
pub fn polish_grid_level<F: Holomorphic + ?Sized>(
    f: &F,
    target: Complex64,
    grid: &GridSpec,
    tol: f64,
) -> Vec<Polished> {
    let nodes = sample_bidisk(grid);
    let found: Vec<Polished> = nodes
        .points()
        .par_iter()
        .filter_map(|pt| {
            let v = f.value(pt)?;
            if (v - target).norm() >= SEED_THRESHOLD {
                return None;
            }
            let p = newton_polish(f, target, *pt, tol, POLISH_MAX_ITER).ok()?;
            Some(polish_to_floor(f, target, p, FLOOR_MAX_EXTRA))
        })
        .collect();
    let pts: Vec<C2Point> = found.iter().map(|p| p.point).collect();
    let kept = dedup_points(&pts, grid.radial_step() / 2.0);
    kept.iter()
        .map(|k| *found.iter().find(|p| p.point == *k).expect("kept point came from found"))
        .collect()
}

/// Samples of `{p = a}` in the closed bidisk. An empty cloud means the pair
/// has no sampled solutions and is skipped by the driver.
pub fn extract_level_set(p: &BiPoly, a: Complex64, grid: &GridSpec, tol: f64) -> PointCloud {
    let pts: Vec<C2Point> = polish_grid_level(p, a, grid, tol)
        .into_iter()
        .map(|x| x.point)
        .collect();
    PointCloud::new(pts, CloudTag::K, None, crate::geometry::BIDISK_SLACK)
        .expect("polished points are finite and in the bidisk")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn affine_level_set() {
        let p = BiPoly::parse_record("[[1,0,1,2,0,1],[0,1,1,2,0,1]]").unwrap();
        let k = extract_level_set(&p, c(0.5), &GridSpec::new(6, 8), 1e-10);
        assert!(!k.is_empty());
        for x in k.iter() {
            assert!((x.z + x.w - 1.0).norm() <= 2e-10);
        }
    }

    #[test]
    fn near_corner_value_is_attained() {
        let p = BiPoly::parse_record("[[1,0,1,2,0,1],[0,1,1,2,0,1]]").unwrap();
        let k = extract_level_set(&p, c(0.999), &GridSpec::new(6, 8), 1e-10);
        assert!(!k.is_empty());
        assert!(k.iter().all(|x| x.radius() > 0.99));
    }

    #[test]
    fn out_of_range_is_empty() {
        let p = BiPoly::parse_record("[[1,1,1,4,0,1]]").unwrap();
        let k = extract_level_set(&p, c(0.3), &GridSpec::new(6, 8), 1e-10);
        assert!(k.is_empty());
        let k = extract_level_set(&p, Complex64::new(0.0, -0.26), &GridSpec::new(6, 8), 1e-10);
        assert!(k.is_empty());
    }
}
