use std::f64::consts::{FRAC_PI_2, PI, TAU};

use flatknot::curve::{closure_report, gauss_from_curve, whitney_index};
use flatknot::pendulum::*;
use flatknot::Error;
use proptest::prelude::*;

#[test]
fn critical_amplitude_does_not_depend_on_r() {
    let x2 = find_critical_xi::<f64>(2).unwrap();
    assert!((x2 - 0.90890856).abs() < 1e-6);
    for r in [4, 6, 8, -2] {
        assert!((find_critical_xi::<f64>(r).unwrap() - x2).abs() < 1e-9, "r = {r}");
    }
}

#[test]
fn odd_and_zero_r_are_rejected() {
    assert!(matches!(build_infinity_curve::<f64>(3, 512), Err(Error::OddWinding(3))));
    assert!(matches!(build_infinity_curve::<f64>(0, 512), Err(Error::ZeroWinding)));
    assert!(matches!(build_infinity_curve::<f64>(2, 64), Err(Error::TooFewSamples { .. })));
}

#[test]
fn infinity_curve_is_a_closed_figure_eight() {
    let c = build_infinity_curve::<f64>(2, 1024).unwrap();
    assert_eq!(whitney_index(&c).unwrap(), 0);
    let xi = find_critical_xi::<f64>(2).unwrap();
    let g = pendulum_alpha(&PendulumParams::new(xi, 2).unwrap(), 1024).unwrap();
    assert!(closure_report(&g).gap() < 1e-8);
    assert!(closure_report(&gauss_from_curve(&c)).gap() < 1e-4);
    assert!((c.length() - TAU).abs() < 1e-4);
}

#[test]
fn odd_r_leaves_a_vertical_gap() {
    let xi = find_critical_xi::<f64>(2).unwrap();
    for r in [1, 3, 5] {
        let g = pendulum_alpha(&PendulumParams::new(xi, r).unwrap(), 1024).unwrap();
        let rep = closure_report(&g);
        assert!(rep.cos_integral.abs() < 1e-8, "r = {r}");
        assert!(rep.sin_integral.abs() > 1e-2, "r = {r}");
    }
}

/// One revolution of `α'' = -sin α` with energy `e = α'²/2 - cos α > 1`,
/// by RK4. Returns `(period, ∫ cos α dt)`.
fn rotation(e: f64) -> (f64, f64) {
    let dt = 1e-4;
    let (mut a, mut v, mut t, mut integral) = (0.0f64, (2.0 * (e + 1.0)).sqrt(), 0.0, 0.0);
    let f = |a: f64, v: f64| (v, -a.sin());
    while a < TAU {
        let (k1a, k1v) = f(a, v);
        let (k2a, k2v) = f(a + 0.5 * dt * k1a, v + 0.5 * dt * k1v);
        let (k3a, k3v) = f(a + 0.5 * dt * k2a, v + 0.5 * dt * k2v);
        let (k4a, k4v) = f(a + dt * k3a, v + dt * k3v);
        let na = a + dt / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        let nv = v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        let step = if na > TAU { dt * (TAU - a) / (na - a) } else { dt };
        integral += 0.5 * step * (a.cos() + na.min(TAU).cos());
        t += step;
        a = na;
        v = nv;
    }
    (t, integral)
}

#[test]
fn full_rotations_cannot_close() {
    for e in [1.2, 1.5, 2.0, 3.0, 5.0] {
        let (period, integral) = rotation(e);
        // rescale time so one revolution has length 2π
        let normalized = integral * TAU / period;
        assert!(normalized.abs() > 0.05, "energy {e}: ∫cos α = {normalized}");
    }
}

#[test]
fn swing_stays_below_a_half_turn() {
    let xi = find_critical_xi::<f64>(2).unwrap();
    let g = pendulum_alpha(&PendulumParams::new(xi, 2).unwrap(), 2048).unwrap();
    let max = g.alpha().iter().fold(0.0f64, |m, a| m.max(a.abs()));
    assert!(max <= 2.0 * xi.asin() + 1e-12);
    assert!(max < PI);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn elliptic_identities(u in -40.0f64..40.0, k in -0.999f64..0.999) {
        let v = jacobi_sn(u, k).unwrap();
        prop_assert!((v.sn * v.sn + v.cn * v.cn - 1.0).abs() < 1e-12);
        prop_assert!((v.dn * v.dn + k * k * v.sn * v.sn - 1.0).abs() < 1e-12);
        let w = jacobi_sn(-u, k).unwrap();
        prop_assert!((w.sn + v.sn).abs() < 1e-12);
    }

    #[test]
    fn sn_has_period_four_k(u in -10.0f64..10.0, k in prop::sample::select(vec![0.2f64, 0.7, 0.95])) {
        let four_k = 4.0 * elliptic_k(k).unwrap();
        let a = jacobi_sn(u, k).unwrap().sn;
        let b = jacobi_sn(u + four_k, k).unwrap().sn;
        prop_assert!((a - b).abs() < 1e-11);
    }

    #[test]
    fn quarter_period_is_the_maximum(k in 0.0f64..0.999) {
        let kk = elliptic_k(k).unwrap();
        prop_assert!(kk >= FRAC_PI_2 - 1e-15);
        prop_assert!((jacobi_sn(kk, k).unwrap().sn - 1.0).abs() < 1e-12);
    }
}
