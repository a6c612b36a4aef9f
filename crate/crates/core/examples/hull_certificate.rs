//! Polynomial-hull certificates against two small clouds: a point of the
//! disk `{0} x D` is cut off from `circle x {0}` by `w`, while the centre of
//! the torus admits no certificate.

use num_complex::Complex64;
use shilov::geometry::{C2Point, CloudTag, PointCloud};
use shilov::verify::{exhaustive_monomial_certificate, hull_search};

fn cloud(pts: Vec<C2Point>) -> PointCloud {
    PointCloud::new(pts, CloudTag::HullCandidate, None, 1e-12).expect("points in the bidisk")
}

fn main() -> shilov::Result<()> {
    let n = 64;
    let angle = |k: usize| k as f64 * std::f64::consts::TAU / n as f64;
    let circle = cloud((0..n).map(|k| C2Point::new(Complex64::from_polar(1.0, angle(k)), 0.0.into())).collect());
    let torus = cloud(
        (0..n * n)
            .map(|k| C2Point::new(Complex64::from_polar(1.0, angle(k / n)), Complex64::from_polar(1.0, angle(k % n))))
            .collect(),
    );

    let q = C2Point::real(0.0, 0.5);
    let h = hull_search(&q, &circle, 4, 5_000, 0)?;
    match h.certificate() {
        Some(c) => println!("(0, 1/2) vs circle x {{0}}: {} with margin {:.12}", c.describe(), c.margin),
        None => println!("(0, 1/2) vs circle x {{0}}: no certificate"),
    }

    let h = hull_search(&C2Point::ORIGIN, &torus, 4, 5_000, 0)?;
    let mono = exhaustive_monomial_certificate(&C2Point::ORIGIN, &torus, 4)?;
    println!(
        "(0, 0) vs torus: certificate {}, best margin {:.2e} after {} evaluations, best monomial margin {:.2e}",
        h.certificate().is_some(),
        h.best.margin,
        h.evaluations,
        mono.margin
    );
    Ok(())
}
