//! Least-squares polynomial approximation of `exp(-F_j)`, the separating
//! function between a level set and the region `{Re F_j >= 1/2}`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construction::StageFunction;
use crate::error::{Error, Result};
use crate::geometry::{sample_bidisk, C2Point, GridSpec, PointCloud};
use crate::polynomials::{monomials, ComplexPoly};

/// Fits with a larger singular-value ratio are refused.
pub const MAX_CONDITION: f64 = 1e12;

/// Values of the monomials of total degree `<= degree` at `pt`, in the
/// standard monomial order.
pub fn monomial_values(pt: &C2Point, degree: u32) -> Vec<Complex64> {
    let d = degree as usize;
    let mut zp = vec![Complex64::new(1.0, 0.0); d + 1];
    let mut wp = vec![Complex64::new(1.0, 0.0); d + 1];
    for k in 1..=d {
        zp[k] = zp[k - 1] * pt.z;
        wp[k] = wp[k - 1] * pt.w;
    }
    monomials(degree)
        .into_iter()
        .map(|(m, n)| zp[m as usize] * wp[n as usize])
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitCertificate {
    pub degree: u32,
    /// Coefficients in the standard monomial order.
    pub coefficients: Vec<Complex64>,
    /// `max |h - exp(-F)|` over the fit nodes.
    pub max_fit_error: f64,
    /// Ratio of extreme singular values of the design matrix.
    pub condition: f64,
    /// `min_K |h| - sup_M |h|`; positive when `h` separates.
    pub margin: f64,
    pub nodes: usize,
}

impl FitCertificate {
    pub fn poly(&self) -> ComplexPoly {
        ComplexPoly::from_coefficients(self.degree, &self.coefficients)
    }
}

/// Least-squares fit of `target` at `nodes` by a polynomial of total degree
/// `<= degree`. Returns the coefficients, the maximal nodal error and the
/// condition estimate.
pub fn least_squares_poly(
    nodes: &[C2Point],
    target: &[Complex64],
    degree: u32,
) -> Result<(Vec<Complex64>, f64, f64)> {
    let cols = monomials(degree).len();
    if nodes.len() < cols {
        return Err(Error::RankDeficient {
            condition: f64::INFINITY,
            reason: format!("{} nodes for {cols} unknowns", nodes.len()),
        });
    }
    let rows: Vec<Vec<Complex64>> = nodes.par_iter().map(|p| monomial_values(p, degree)).collect();
    let a = DMatrix::from_fn(nodes.len(), cols, |i, j| rows[i][j]);
    let b = DVector::from_column_slice(target);
    let qr = a.clone().qr();
    let r = qr.r();
    let condition = condition_number(&r);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::RankDeficient {
            condition,
            reason: format!("degree {degree} on {} nodes", nodes.len()),
        });
    }
    let y = qr.q().adjoint() * &b;
    let x = r.solve_upper_triangular(&y).ok_or_else(|| Error::RankDeficient {
        condition,
        reason: "singular triangular factor".into(),
    })?;
    let resid = &a * &x - &b;
    let max_err = resid.iter().map(|r| r.norm()).fold(0.0, f64::max);
    Ok((x.iter().copied().collect(), max_err, condition))
}

/// Ratio of extreme singular values of a square factor, from the first
/// SVD that reproduces it.
fn condition_number(r: &DMatrix<Complex64>) -> f64 {
    let scale = r.norm();
    for eps in [0.0, f64::EPSILON, 1e-12] {
        let Some(svd) = r.clone().try_svd(true, true, eps, 100_000) else {
            continue;
        };
        let s = svd.singular_values.clone();
        let ok = svd.recompose().is_ok_and(|m| (m - r).norm() <= 1e-12 * scale.max(1.0));
        if ok {
            let (hi, lo) = s.iter().fold((0.0f64, f64::INFINITY), |(hi, lo), &x| (hi.max(x), lo.min(x)));
            return if lo > 0.0 { hi / lo } else { f64::INFINITY };
        }
    }
    f64::INFINITY
}

/// Fit nodes for `exp(-F)`: grid points where `F` is resolved and
/// `Re F >= -1`, so the target stays bounded by `e`.
pub fn fit_nodes(f: &StageFunction, grid: &GridSpec) -> (Vec<C2Point>, Vec<Complex64>) {
    let pts = sample_bidisk(grid);
    let vals: Vec<Option<Complex64>> = pts
        .points()
        .par_iter()
        .map(|p| {
            let v = f.eval_value(p).complex()?;
            (v.re >= -1.0).then(|| (-v).exp())
        })
        .collect();
    pts.iter()
        .zip(vals)
        .filter_map(|(p, v)| v.map(|v| (*p, v)))
        .unzip()
}

/// Polynomial approximation of `exp(-F)` and the separation it achieves
/// between `k_cloud` and `m_witnesses`. Low degrees need not separate.
pub fn fit_certificate_poly(
    f: &StageFunction,
    degree: u32,
    grid: &GridSpec,
    k_cloud: &PointCloud,
    m_witnesses: &PointCloud,
) -> Result<FitCertificate> {
    let (mut nodes, mut target) = fit_nodes(f, grid);
    for p in k_cloud.iter() {
        if let Some(v) = f.eval_value(p).complex() {
            nodes.push(*p);
            target.push((-v).exp());
        }
    }
    let (coefficients, max_fit_error, condition) = least_squares_poly(&nodes, &target, degree)?;
    let h = ComplexPoly::from_coefficients(degree, &coefficients);
    let on_k = k_cloud.iter().map(|p| h.eval(p).norm()).fold(f64::INFINITY, f64::min);
    let on_m = m_witnesses.iter().map(|p| h.eval(p).norm()).fold(0.0, f64::max);
    Ok(FitCertificate {
        degree,
        coefficients,
        max_fit_error,
        condition,
        margin: on_k - on_m,
        nodes: nodes.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::{BiPoly, ScaledPoly};

    #[test]
    fn exact_polynomials_are_recovered() {
        let g = GridSpec::new(4, 6);
        let nodes: Vec<C2Point> = sample_bidisk(&g).points().to_vec();
        let q = |p: &C2Point| p.z * p.z - Complex64::new(0.0, 2.0) * p.z * p.w + 0.5;
        let target: Vec<Complex64> = nodes.iter().map(q).collect();
        let (c, err, cond) = least_squares_poly(&nodes, &target, 2).unwrap();
        assert!(err < 1e-12, "{err}");
        // Singular values 24 and 28/3 for this grid.
        assert!((cond - 72.0 / 28.0).abs() < 1e-12, "{cond}");
        let h = ComplexPoly::from_coefficients(2, &c);
        assert!((h.eval(&C2Point::real(0.3, -0.7)) - q(&C2Point::real(0.3, -0.7))).norm() < 1e-12);
    }

    #[test]
    fn collinear_nodes_are_rank_deficient() {
        let nodes: Vec<C2Point> = (0..50).map(|k| C2Point::real(k as f64 / 50.0, 0.0)).collect();
        let target = vec![Complex64::new(1.0, 0.0); 50];
        assert!(matches!(
            least_squares_poly(&nodes, &target, 2),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn worked_stage_cubic_cannot_beat_the_cauchy_bound() {
        // exp(-F_1) = exp(z + w - 1). On the diagonal z = w = t this is
        // e^{-1} e^{2t}, whose t^4 coefficient e^{-1}·16/24 bounds below the
        // sup error of any cubic on |t| = 1.
        let p = BiPoly::parse_record("[[1,0,1,2,0,1],[0,1,1,2,0,1]]").unwrap();
        let f = StageFunction::base(ScaledPoly::normalize(&p, Complex64::new(0.5, 0.0)).unwrap());
        let empty = PointCloud::new(vec![C2Point::ORIGIN], crate::geometry::CloudTag::K, None, 1e-12).unwrap();
        let cert = fit_certificate_poly(&f, 3, &GridSpec::new(6, 8), &empty, &empty).unwrap();
        let h = cert.poly();
        let bound = (-1.0f64).exp() * 16.0 / 24.0;
        let diag_err = (0..2000)
            .map(|k| {
                let t = Complex64::from_polar(1.0, k as f64 * std::f64::consts::TAU / 2000.0);
                (h.eval(&C2Point::new(t, t)) - (t + t - 1.0).exp()).norm()
            })
            .fold(0.0, f64::max);
        assert!(diag_err >= bound - 1e-12);
        assert!(cert.max_fit_error > 0.05);
    }

    #[test]
    fn constant_fit_does_not_separate() {
        let p = BiPoly::parse_record("[[1,0,1,2,0,1],[0,1,1,2,0,1]]").unwrap();
        let f = StageFunction::base(ScaledPoly::normalize(&p, Complex64::new(0.5, 0.0)).unwrap());
        let k = PointCloud::new(vec![C2Point::real(1.0, 0.0)], crate::geometry::CloudTag::K, None, 1e-12).unwrap();
        let m = PointCloud::new(vec![C2Point::ORIGIN], crate::geometry::CloudTag::MWitness, None, 1e-12).unwrap();
        let cert = fit_certificate_poly(&f, 0, &GridSpec::new(6, 8), &k, &m).unwrap();
        assert!(cert.margin <= 0.0);
    }
}
