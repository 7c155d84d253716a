//! Complete elliptic integral `K` and the Jacobi functions `sn`, `cn`, `dn`.
//!
//! **Modulus convention.** Every function here takes the *modulus* `k`, which
//! enters squared: `K(k) = ∫₀¹ dt / √((1 - t²)(1 - k² t²))` and
//! `u = ∫₀^φ dθ / √(1 - k² sin² θ)`, `sn(u | k) = sin φ`. Libraries that take
//! the parameter `m = k²` must be called with `m = k * k` to agree.

use crate::error::{Error, Result};
use crate::real::Real;

const MAX_AGM_STEPS: usize = 64;

/// `sn`, `cn`, `dn` at one argument.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipticValue<T> {
    pub u: T,
    pub k: T,
    pub sn: T,
    pub cn: T,
    pub dn: T,
}

fn check_modulus<T: Real>(k: T) -> Result<T> {
    let k = k.abs();
    if !(k < T::one()) {
        return Err(Error::ModulusOutOfRange(k.to_f64_lossy()));
    }
    Ok(k)
}

/// Complementary modulus `√(1 - k²)` without cancellation near `k = 1`.
fn complementary<T: Real>(k: T) -> T {
    ((T::one() - k) * (T::one() + k)).sqrt()
}

/// Arithmetic-geometric mean of `a` and `b`.
pub fn agm<T: Real>(mut a: T, mut b: T) -> T {
    for _ in 0..MAX_AGM_STEPS {
        if (a - b).abs() <= T::epsilon() * a.abs() {
            break;
        }
        let next = (a + b) * T::lit(0.5);
        b = (a * b).sqrt();
        a = next;
    }
    (a + b) * T::lit(0.5)
}

/// Complete elliptic integral of the first kind, `K(k) = π / (2 AGM(1, k'))`.
///
/// `K` is even in `k`; `|k| >= 1` is rejected.
pub fn elliptic_k<T: Real>(k: T) -> Result<T> {
    let k = check_modulus(k)?;
    Ok(T::FRAC_PI_2() / agm(T::one(), complementary(k)))
}

/// Jacobi elliptic functions by the descending Landen (AGM) scheme.
///
/// The argument is first reduced modulo the real period `4K(k)`.
pub fn jacobi_sn<T: Real>(u: T, k: T) -> Result<EllipticValue<T>> {
    let km = check_modulus(k)?;
    if km == T::zero() {
        let (s, c) = u.sin_cos();
        return Ok(EllipticValue { u, k, sn: s, cn: c, dn: T::one() });
    }
    let period = T::lit(4.0) * elliptic_k(km)?;
    let ur = u - period * (u / period).round();

    let mut a = vec![T::one()];
    let mut c = vec![km];
    let mut b = complementary(km);
    while c.last().unwrap().abs() > T::epsilon() && a.len() < MAX_AGM_STEPS {
        let an = *a.last().unwrap();
        let next_a = (an + b) * T::lit(0.5);
        let next_c = (an - b) * T::lit(0.5);
        b = (an * b).sqrt();
        a.push(next_a);
        c.push(next_c);
    }
    let steps = a.len() - 1;
    let mut phi = T::lit(2.0).powi(steps as i32) * a[steps] * ur;
    for n in (1..=steps).rev() {
        let s = (c[n] / a[n] * phi.sin()).max(-T::one()).min(T::one());
        phi = (phi + s.asin()) * T::lit(0.5);
    }
    let (sn, cn) = phi.sin_cos();
    let dn = (T::one() - km * km * sn * sn).sqrt();
    Ok(EllipticValue { u, k, sn, cn, dn })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    /// Adaptive Simpson quadrature, used as an independent oracle.
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
        fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm);
            let frm = f(rm);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            let delta = left + right - whole;
            if depth == 0 || delta.abs() <= 15.0 * tol {
                return left + right + delta / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
        let fa = f(a);
        let fb = f(b);
        let fm = f(0.5 * (a + b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(f, a, b, fa, fm, fb, whole, tol, 40)
    }

    /// `K` from its defining integral after `t = sin θ`.
    fn k_by_quadrature(k: f64) -> f64 {
        simpson(&|th: f64| 1.0 / (1.0 - k * k * th.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 1e-15)
    }

    /// Incomplete integral of the first kind.
    fn f_by_quadrature(phi: f64, k: f64) -> f64 {
        simpson(&|th: f64| 1.0 / (1.0 - k * k * th.sin().powi(2)).sqrt(), 0.0, phi, 1e-15)
    }

    #[test]
    fn k_at_zero() {
        assert!((elliptic_k(0.0f64).unwrap() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn k_lemniscatic() {
        let k = elliptic_k(1.0f64 / 2f64.sqrt()).unwrap();
        // Γ(1/4)² / (4 √π)
        let gamma_quarter = 3.625_609_908_221_908_f64;
        let expect = gamma_quarter * gamma_quarter / (4.0 * PI.sqrt());
        assert!((k - expect).abs() < 1e-14, "{k} vs {expect}");
        assert!((k - k_by_quadrature(1.0 / 2f64.sqrt())).abs() < 1e-12);
        assert!((k - 1.854_074_677_301_372).abs() < 1e-14);
    }

    #[test]
    fn k_matches_quadrature_near_critical_modulus() {
        let k = 0.908_908_56;
        assert!((elliptic_k(k).unwrap() - k_by_quadrature(k)).abs() < 1e-12);
        assert!((elliptic_k(-k).unwrap() - elliptic_k(k).unwrap()).abs() == 0.0);
    }

    #[test]
    fn k_rejects_modulus_one() {
        assert_eq!(elliptic_k(1.0f64).unwrap_err(), Error::ModulusOutOfRange(1.0));
        assert!(jacobi_sn(0.3f64, 1.2).is_err());
    }

    #[test]
    fn sn_degenerates_to_sine() {
        for u in [0.3f64, 1.0, 2.5] {
            let v = jacobi_sn(u, 0.0).unwrap();
            assert!((v.sn - u.sin()).abs() < 1e-12);
            assert!((v.cn - u.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn sn_quarter_period() {
        let k = 0.5f64;
        let v = jacobi_sn(elliptic_k(k).unwrap(), k).unwrap();
        assert!((v.sn - 1.0).abs() < 1e-11);
    }

    #[test]
    fn sn_matches_amplitude_inversion() {
        let (u, k) = (0.7f64, 0.8f64);
        let (mut lo, mut hi) = (0.0f64, FRAC_PI_2);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if f_by_quadrature(mid, k) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let phi = 0.5 * (lo + hi);
        let v = jacobi_sn(u, k).unwrap();
        assert!((v.sn - phi.sin()).abs() < 1e-10, "{} vs {}", v.sn, phi.sin());
        assert!((v.cn - phi.cos()).abs() < 1e-10);
    }

    #[test]
    fn sn_is_odd_and_periodic() {
        for &k in &[0.2f64, 0.7, 0.95] {
            let four_k = 4.0 * elliptic_k(k).unwrap();
            for &u in &[-3.1f64, -0.4, 0.9, 5.3, 17.0] {
                let a = jacobi_sn(u, k).unwrap();
                let b = jacobi_sn(u + four_k, k).unwrap();
                let c = jacobi_sn(-u, k).unwrap();
                assert!((a.sn - b.sn).abs() < 1e-11);
                assert!((a.sn + c.sn).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn f32_sn_is_close_to_f64() {
        let a = jacobi_sn(1.3f32, 0.6).unwrap();
        let b = jacobi_sn(1.3f64, 0.6).unwrap();
        assert!((a.sn as f64 - b.sn).abs() < 1e-5);
    }
}
