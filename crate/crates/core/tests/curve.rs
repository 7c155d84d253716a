use std::f64::consts::TAU;

use flatknot::curve::{
    closure_report, curve_from_gauss, gauss_from_curve, resample_arclength, whitney_index, ClosedCurve,
};
use flatknot::fixtures;
use flatknot::Point;
use proptest::prelude::*;

fn max_point_error(a: &ClosedCurve<f64>, b: &ClosedCurve<f64>) -> f64 {
    a.points().iter().zip(b.points()).map(|(p, q)| p.dist(*q)).fold(0.0, f64::max)
}

#[test]
fn gauss_round_trip_on_smooth_curves() {
    for n in [256, 512, 1024] {
        let h = TAU / n as f64;
        for c in [fixtures::circle::<f64>(n), fixtures::ellipse::<f64>(n, 1.0, 0.6)] {
            let back = curve_from_gauss(&gauss_from_curve(&c));
            // compare up to translation
            let shift = c.centroid() - back.centroid();
            let err = max_point_error(&c, &back.translated(shift));
            assert!(err <= 10.0 * h * h, "N = {n}: error {err:.2e}");
        }
    }
}

#[test]
fn whitney_index_of_fixtures() {
    assert_eq!(whitney_index(&fixtures::circle::<f64>(128)).unwrap(), 1);
    assert_eq!(whitney_index(&fixtures::figure_eight::<f64>(256)).unwrap(), 0);
    assert_eq!(whitney_index(&fixtures::trefoil::<f64>(256)).unwrap().abs(), 2);
    assert_eq!(whitney_index(&fixtures::clasp::<f64>(256)).unwrap(), 1);
}

/// A star-shaped polygon with `k` random radii.
fn star(radii: &[f64]) -> Vec<Point<f64>> {
    let k = radii.len();
    radii.iter().enumerate().map(|(i, r)| Point::unit(TAU * i as f64 / k as f64) * *r).collect()
}

fn polygon_length(p: &[Point<f64>]) -> f64 {
    (0..p.len()).map(|i| p[i].dist(p[(i + 1) % p.len()])).sum()
}

/// Regular, with every turn between samples below half a radian.
fn well_resolved(c: &ClosedCurve<f64>) -> bool {
    whitney_index(c).is_ok() && gauss_from_curve(c).alpha().windows(2).all(|w| (w[1] - w[0]).abs() < 0.5)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, max_global_rejects: 20_000, ..ProptestConfig::default() })]

    // a corner turning by θ costs about h(1 - cos θ/2) of closure, so the
    // polylines here are coarse samples of smooth curves
    #[test]
    fn resampled_polylines_close(seed in 0u64..1000, harmonics in 1usize..5, k in 64usize..200) {
        let coarse = fixtures::random_curve::<f64>(k, harmonics, seed);
        prop_assume!(well_resolved(&coarse));
        let c = resample_arclength(coarse.points(), 512).unwrap();
        let r = closure_report(&gauss_from_curve(&c));
        prop_assert!(r.cos_integral.abs() + r.sin_integral.abs() <= 1e-3 * TAU);
    }

    #[test]
    fn resampling_keeps_length_and_spacing(radii in prop::collection::vec(0.5f64..2.0, 5..20), n in 64usize..600) {
        let pts = star(&radii);
        let input = polygon_length(&pts);
        let c = resample_arclength(&pts, n).unwrap();
        prop_assert_eq!(c.len(), n);
        prop_assert!(c.length() <= input + 1e-9);
        prop_assert!(c.spacing_ratio() < 1.0 + 1e-6 || c.length() < input);
    }

    #[test]
    fn whitney_index_is_stable(seed in 0u64..400, harmonics in 1usize..5) {
        let c = fixtures::random_curve::<f64>(256, harmonics, seed);
        prop_assume!(well_resolved(&c));
        let w = whitney_index(&c).unwrap();
        let fine = resample_arclength(c.points(), 512).unwrap();
        prop_assert_eq!(whitney_index(&fine).unwrap(), w);
        prop_assert_eq!(whitney_index(&c.reversed()).unwrap(), -w);
        prop_assert_eq!(whitney_index(&c.rotated(1.3).scaled(2.5)).unwrap(), w);
    }
}
