//! Critical curves of `U_{x²}`: the pendulum solutions in the Gauss
//! representation.
//!
//! A critical angle function satisfies `α̈ + ω² sin α = 0`; the oscillating
//! solutions are `sin(α/2) = ξ sn(ωt + t₀ | ξ)`. The angle is periodic on
//! `[0, 2π]` when `2πω = 2rK(ξ)`, the curve closes in `y` when `r` is even, and
//! it closes in `x` when `∫ cos α = 0`, which pins `ξ` to the positive zero of
//! `Δx(ξ) = ∫₀^{2π} (1 - 2ξ² sn²(rK(ξ)t/π | ξ)) dt`. The resulting closed
//! curve is the figure-eight ("∞") elastica, traversed `r/2` times.

pub mod elliptic;

pub use elliptic::{elliptic_k, jacobi_sn, EllipticValue};

use crate::curve::{curve_from_gauss, ClosedCurve, GaussRep};
use crate::error::{Error, Result};
use crate::real::{Point, Real};

/// Quadrature nodes for `Δx`.
pub const DELTA_X_NODES: usize = 4096;

/// Right end of the bracket searched for the zero of `Δx`.
const BRACKET_HI: f64 = 0.99;

/// Parameters of an oscillating pendulum solution with `s = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PendulumParams<T> {
    pub xi: T,
    pub r: i64,
    pub omega: T,
    pub t0: T,
}

impl<T: Real> PendulumParams<T> {
    /// `ω = r K(ξ) / π`, `t₀ = 0`.
    pub fn new(xi: T, r: i64) -> Result<Self> {
        if r == 0 {
            return Err(Error::ZeroWinding);
        }
        let k = elliptic_k(xi)?;
        let omega = T::from_i64(r).unwrap() * k / T::PI();
        Ok(Self { xi, r, omega, t0: T::zero() })
    }

    pub fn with_phase(mut self, t0: T) -> Self {
        self.t0 = t0;
        self
    }

    /// Analytic `α̇(t) = 2ξω cn dn / √(1 - ξ² sn²)`.
    pub fn alpha_dot(&self, t: T) -> T {
        let v = jacobi_sn(self.omega * t + self.t0, self.xi).expect("validated modulus");
        let denom = (T::one() - self.xi * self.xi * v.sn * v.sn).sqrt();
        T::lit(2.0) * self.xi * self.omega * v.cn * v.dn / denom
    }
}

/// Samples `α(t) = 2 arcsin(ξ sn(ωt + t₀ | ξ))` on `n` points of `[0, 2π)`.
///
/// `|ξ sn| ≤ |ξ| < 1`, so the principal arcsine is already a smooth lift.
pub fn pendulum_alpha<T: Real>(p: &PendulumParams<T>, n: usize) -> Result<GaussRep<T>> {
    if n < 64 {
        return Err(Error::TooFewSamples { min: 64, got: n });
    }
    let h = T::two_pi() / T::from_usize_lossy(n);
    let alpha = (0..n)
        .map(|i| {
            let t = h * T::from_usize_lossy(i);
            let v = jacobi_sn(p.omega * t + p.t0, p.xi)?;
            Ok(T::lit(2.0) * (p.xi * v.sn).asin())
        })
        .collect::<Result<Vec<T>>>()?;
    GaussRep::new(alpha, Point::zero())
}

/// `Δx(ξ, r)` by the periodic trapezoid rule on `n` nodes.
pub fn delta_x<T: Real>(xi: T, r: i64, n: usize) -> Result<T> {
    if r == 0 {
        return Err(Error::ZeroWinding);
    }
    if n < 256 {
        return Err(Error::TooFewSamples { min: 256, got: n });
    }
    let k = elliptic_k(xi)?;
    let rate = T::from_i64(r).unwrap() * k / T::PI();
    let h = T::two_pi() / T::from_usize_lossy(n);
    let two_xi2 = T::lit(2.0) * xi * xi;
    let mut acc = T::zero();
    for i in 0..n {
        let v = jacobi_sn(rate * h * T::from_usize_lossy(i), xi)?;
        acc += T::one() - two_xi2 * v.sn * v.sn;
    }
    Ok(acc * h)
}

/// Positive zero of `Δx(·, r)` on `(0, 1)` by bisection.
pub fn find_critical_xi<T: Real>(r: i64) -> Result<T> {
    let f = |x: T| delta_x(x, r, DELTA_X_NODES);
    let mut lo = T::zero();
    let mut hi = T::lit(BRACKET_HI);
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if !(f_lo > T::zero() && f_hi < T::zero()) {
        return Err(Error::BracketFailure {
            lo: 0.0,
            hi: BRACKET_HI,
            f_lo: f_lo.to_f64_lossy(),
            f_hi: f_hi.to_f64_lossy(),
        });
    }
    let tol = T::tol(1e-13);
    while hi - lo > tol {
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * T::lit(0.5))
}

/// The closed figure-eight critical curve for even `r`, of length `2π`.
pub fn build_infinity_curve<T: Real>(r: i64, n: usize) -> Result<ClosedCurve<T>> {
    if r == 0 {
        return Err(Error::ZeroWinding);
    }
    if r % 2 != 0 {
        return Err(Error::OddWinding(r));
    }
    if n < 256 {
        return Err(Error::TooFewSamples { min: 256, got: n });
    }
    let xi = find_critical_xi::<T>(r)?;
    let g = pendulum_alpha(&PendulumParams::new(xi, r)?, n)?;
    Ok(curve_from_gauss(&g))
}
