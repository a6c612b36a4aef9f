use num_complex::Complex64;
use proptest::prelude::*;

use shilov::geometry::{hausdorff, poly_metric, select_cauchy_subsequence, C2Point, CloudTag, PointCloud};

fn point() -> impl Strategy<Value = C2Point> {
    (0.0..=1.0f64, 0.0..std::f64::consts::TAU, 0.0..=1.0f64, 0.0..std::f64::consts::TAU)
        .prop_map(|(r, a, s, b)| C2Point::new(Complex64::from_polar(r, a), Complex64::from_polar(s, b)))
}

fn cloud() -> impl Strategy<Value = PointCloud> {
    prop::collection::vec(point(), 1..30).prop_map(|pts| PointCloud::new(pts, CloudTag::V, None, 1e-12).unwrap())
}

fn brute(a: &PointCloud, b: &PointCloud) -> f64 {
    let directed = |x: &PointCloud, y: &PointCloud| {
        x.iter()
            .map(|p| y.iter().map(|q| poly_metric(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

proptest! {
    #[test]
    fn metric_axioms(a in cloud(), b in cloud(), c in cloud()) {
        let ab = hausdorff(&a, &b).unwrap();
        prop_assert_eq!(ab, hausdorff(&b, &a).unwrap());
        prop_assert_eq!(ab, brute(&a, &b));
        prop_assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        prop_assert!(ab <= hausdorff(&a, &c).unwrap() + hausdorff(&c, &b).unwrap() + 1e-12);
        prop_assert!(ab <= 2.0);
    }

    #[test]
    fn selected_gaps_do_not_increase(clouds in prop::collection::vec(cloud(), 2..6)) {
        let sel = select_cauchy_subsequence(&clouds, 1e-3).unwrap();
        prop_assert_eq!(sel.indices[0], 0);
        prop_assert_eq!(sel.gaps.len() + 1, sel.indices.len());
        prop_assert!(sel.indices.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(sel.gaps.windows(2).all(|w| w[1] <= w[0]));
    }
}

#[test]
fn translated_copy_is_at_the_shift() {
    let pts: Vec<C2Point> = (0..8).map(|k| C2Point::real(k as f64 / 10.0, 0.0)).collect();
    let a = PointCloud::new(pts.clone(), CloudTag::V, None, 1e-12).unwrap();
    let shifted = pts.iter().map(|p| p.offset(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.25))).collect();
    let b = PointCloud::new(shifted, CloudTag::V, None, 1e-12).unwrap();
    assert_eq!(hausdorff(&a, &b).unwrap(), 0.25);
}
