use std::f64::consts::TAU;

use flatknot::curve::{gauss_from_curve, whitney_index};
use flatknot::fixtures;
use flatknot::pendulum::build_infinity_curve;
use flatknot::uniformization::*;
use flatknot::Point;
use proptest::prelude::*;

#[test]
fn identity_energy_is_total_turning() {
    let id = EnergyFunctional::identity();
    for c in [
        fixtures::circle::<f64>(512),
        fixtures::trefoil::<f64>(512),
        fixtures::figure_eight::<f64>(512),
        build_infinity_curve::<f64>(2, 512).unwrap(),
    ] {
        let w = whitney_index(&c).unwrap() as f64;
        assert!((curve_energy(&c, &id) - TAU * w).abs() < 1e-3);
    }
}

#[test]
fn extended_energy_tends_to_the_discrete_energy() {
    let sq = EnergyFunctional::square();
    let c = fixtures::ellipse::<f64>(2048, 1.0, 0.6);
    let u = curve_energy(&c, &sq);
    let errs: Vec<f64> = [0.1, 0.05, 0.025]
        .iter()
        .map(|&e| (energy_uf_extended(&c, &sq, e).unwrap() - u).abs())
        .collect();
    for w in errs.windows(2) {
        assert!(w[1] < w[0]);
        assert!((w[0] / w[1]).log2() >= 1.8, "{errs:?}");
    }
}

#[test]
fn extended_energy_rejects_bad_eps() {
    let c = fixtures::circle::<f64>(64);
    let sq = EnergyFunctional::square();
    assert!(energy_uf_extended(&c, &sq, 0.05).is_err());
    assert!(energy_uf_extended(&c, &sq, 1.0).is_err());
    assert!(energy_uf_extended(&c, &sq, 0.5).is_ok());
}

#[test]
fn infinity_curve_satisfies_the_euler_lagrange_equation() {
    let c = build_infinity_curve::<f64>(2, 1024).unwrap();
    let g = gauss_from_curve(&c);
    let report = el_residual(&g, &EnergyFunctional::square());
    assert!(report.rms_residual < 1e-3);
    // a noisy figure-eight is not critical
    let noisy = gauss_from_curve(&fixtures::noisy_figure_eight::<f64>(1024, 0.05, 2));
    assert!(el_residual(&noisy, &EnergyFunctional::square()).rms_residual > 1e-2);
}

#[test]
fn projected_gradient_is_orthogonal_to_closure_directions() {
    let g = gauss_from_curve(&fixtures::trefoil::<f64>(256));
    let grad = uf_gradient(&g, &EnergyFunctional::power(4.0).unwrap());
    let h = g.step();
    let cos: Vec<f64> = g.alpha().iter().map(|a| a.cos()).collect();
    let sin: Vec<f64> = g.alpha().iter().map(|a| a.sin()).collect();
    let scale = l2_norm(&grad, h);
    assert!(inner(&grad, &cos, h).abs() < 1e-10 * scale);
    assert!(inner(&grad, &sin, h).abs() < 1e-10 * scale);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn energy_is_invariant_under_rigid_motion_and_shift(
        seed in 0u64..500,
        angle in -3.0f64..3.0,
        dx in -5.0f64..5.0,
        dy in -5.0f64..5.0,
        shift in 0usize..256,
    ) {
        let c = fixtures::random_curve::<f64>(256, 3, seed);
        prop_assume!(whitney_index(&c).is_ok());
        for e in [EnergyFunctional::square(), EnergyFunctional::identity(), EnergyFunctional::power(4.0).unwrap()] {
            let u = curve_energy(&c, &e);
            let moved = curve_energy(&c.rotated(angle).translated(Point::new(dx, dy)), &e);
            let shifted = curve_energy(&c.cyclic_shift(shift), &e);
            let tol = 1e-12 * u.abs().max(1.0);
            prop_assert!((moved - u).abs() <= tol, "{} moved {moved} vs {u}", e.name());
            prop_assert!((shifted - u).abs() <= tol, "{} shifted {shifted} vs {u}", e.name());
        }
    }

    #[test]
    fn reversal_keeps_even_energies_and_negates_turning(seed in 0u64..500) {
        let c = fixtures::random_curve::<f64>(256, 3, seed);
        prop_assume!(whitney_index(&c).is_ok());
        let r = c.reversed();
        let sq = EnergyFunctional::square();
        let id = EnergyFunctional::identity();
        let u = curve_energy(&c, &sq);
        prop_assert!((curve_energy(&r, &sq) - u).abs() <= 1e-12 * u);
        prop_assert!((curve_energy(&r, &id) + curve_energy(&c, &id)).abs() <= 1e-9);
    }

    #[test]
    fn energy_scales_inversely_with_size(seed in 0u64..500, s in 0.2f64..5.0) {
        let c = fixtures::random_curve::<f64>(256, 3, seed);
        let sq = EnergyFunctional::square();
        let u = curve_energy(&c, &sq);
        prop_assert!((curve_energy(&c.scaled(s), &sq) - u / s).abs() <= 1e-9 * u / s);
    }
}
