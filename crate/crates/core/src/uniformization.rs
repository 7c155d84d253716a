//! Uniformization energies `U_f = ∫ f(κ) dt` in the Gauss representation.
//!
//! The discrete energy is `h Σ f(κ_i)` with the central-difference curvature
//! `κ_i = (α_{i+1} - α_{i-1}) / 2h`. Its gradient with respect to the angle
//! samples is taken in the discrete `L²` inner product `⟨u, v⟩ = h Σ u_i v_i`
//! and projected onto the tangent space of the two closure constraints
//! `∫ cos α = ∫ sin α = 0`, whose normals are `sin α` and `cos α`.

use std::fmt;
use std::sync::Arc;

use crate::curve::{gauss_from_curve, ClosedCurve, GaussRep};
use crate::error::{Error, Result};
use crate::real::{Point, Real};

type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Step of the central differences used when derivatives are not supplied.
const FD_STEP: f64 = 1e-5;

/// An integrand `f` with `f(0) = 0`, together with its first two derivatives.
#[derive(Clone)]
pub struct EnergyFunctional<T> {
    name: String,
    f: ScalarFn<T>,
    f1: Option<ScalarFn<T>>,
    f2: Option<ScalarFn<T>>,
}

impl<T> fmt::Debug for EnergyFunctional<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EnergyFunctional")
            .field("name", &self.name)
            .field("f_prime", &self.f1.is_some())
            .field("f_double_prime", &self.f2.is_some())
            .finish()
    }
}

impl<T: Real> EnergyFunctional<T> {
    /// Wraps `f`; derivatives fall back to central differences.
    pub fn new(name: impl Into<String>, f: impl Fn(T) -> T + Send + Sync + 'static) -> Result<Self> {
        let e = Self { name: name.into(), f: Arc::new(f), f1: None, f2: None };
        if (e.f)(T::zero()).abs() >= T::tol(1e-12) {
            return Err(Error::Invalid(format!("f(0) must vanish for functional {}", e.name)));
        }
        Ok(e)
    }

    pub fn with_derivatives(
        mut self,
        f1: impl Fn(T) -> T + Send + Sync + 'static,
        f2: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Self {
        self.f1 = Some(Arc::new(f1));
        self.f2 = Some(Arc::new(f2));
        self
    }

    /// `f(x) = x`; its energy is `2π` times the Whitney index.
    pub fn identity() -> Self {
        Self::new("x", |x| x).unwrap().with_derivatives(|_| T::one(), |_| T::zero())
    }

    /// `f(x) = x²`, the elastic (pendulum) case.
    pub fn square() -> Self {
        let two = T::lit(2.0);
        Self::new("x^2", |x| x * x)
            .unwrap()
            .with_derivatives(move |x| two * x, move |_| two)
    }

    /// `f(x) = |x|^p` for `p > 1`.
    pub fn power(p: T) -> Result<Self> {
        if !(p > T::one()) {
            return Err(Error::Invalid("power functional needs p > 1".into()));
        }
        let name = format!("|x|^{p}");
        let f1 = move |x: T| p * x.abs().powf(p - T::one()) * x.signum();
        let f2 = move |x: T| {
            if x == T::zero() && p < T::lit(2.0) {
                T::infinity()
            } else {
                p * (p - T::one()) * x.abs().powf(p - T::lit(2.0))
            }
        };
        Ok(Self::new(name, move |x: T| x.abs().powf(p))?.with_derivatives(f1, f2))
    }

    /// `f(x) = ln(1 + x²)`: grows sublinearly, so concentrating curvature in a
    /// small loop lowers the energy.
    pub fn log_quadratic() -> Self {
        let one = T::one();
        let two = T::lit(2.0);
        Self::new("ln(1+x^2)", move |x: T| (one + x * x).ln())
            .unwrap()
            .with_derivatives(
                move |x| two * x / (one + x * x),
                move |x| two * (one - x * x) / ((one + x * x) * (one + x * x)),
            )
    }

    /// Looks up a functional by its tag: `x`, `x^2`, `x^4`, `|x|^p`, `ln(1+x^2)`.
    pub fn by_name(tag: &str) -> Result<Self> {
        let t = tag.trim().replace(' ', "");
        match t.as_str() {
            "x" => Ok(Self::identity()),
            "x^2" | "x2" | "square" => Ok(Self::square()),
            "ln(1+x^2)" | "log" => Ok(Self::log_quadratic()),
            _ => {
                let p = t
                    .strip_prefix("|x|^")
                    .or_else(|| t.strip_prefix("x^"))
                    .and_then(|s| s.parse::<f64>().ok())
                    .ok_or_else(|| Error::Invalid(format!("unknown functional {tag}")))?;
                let mut e = Self::power(T::lit(p))?;
                e.name = t;
                Ok(e)
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn value(&self, x: T) -> T {
        (self.f)(x)
    }

    pub fn derivative(&self, x: T) -> T {
        match &self.f1 {
            Some(d) => d(x),
            None => {
                let h = T::lit(FD_STEP);
                ((self.f)(x + h) - (self.f)(x - h)) / (h + h)
            }
        }
    }

    pub fn second_derivative(&self, x: T) -> T {
        match &self.f2 {
            Some(d) => d(x),
            None => {
                let h = T::lit(FD_STEP);
                match &self.f1 {
                    Some(d) => (d(x + h) - d(x - h)) / (h + h),
                    None => ((self.f)(x + h) - (self.f)(x) - (self.f)(x) + (self.f)(x - h)) / (h * h),
                }
            }
        }
    }
}

/// Least-squares fit of the Euler–Lagrange equation
/// `f''(α̇) α̈ = C₁ cos α + C₂ sin α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElResidualReport<T> {
    pub c1: T,
    pub c2: T,
    pub rms_residual: T,
}

/// `κ_i = (α_{i+1} - α_{i-1}) / 2h` on the periodic lift.
pub fn discrete_curvature<T: Real>(g: &GaussRep<T>) -> Vec<T> {
    let n = g.len() as isize;
    let inv = T::one() / (g.step() + g.step());
    (0..n).map(|i| (g.alpha_at(i + 1) - g.alpha_at(i - 1)) * inv).collect()
}

/// `U_f = h Σ f(κ_i)`.
pub fn energy_uf<T: Real>(g: &GaussRep<T>, e: &EnergyFunctional<T>) -> T {
    let h = g.step();
    discrete_curvature(g).into_iter().map(|k| e.value(k)).sum::<T>() * h
}

/// Extended uniformization energy at finite `eps`: the curvature at `γ(t)` is
/// replaced by the signed reciprocal circumradius of `γ(t-eps), γ(t), γ(t+eps)`.
///
/// Off-sample points are interpolated by periodic cubic Hermite segments in
/// the chord-length parameter. Collinear triples contribute `f(0) = 0`.
pub fn energy_uf_extended<T: Real>(c: &ClosedCurve<T>, e: &EnergyFunctional<T>, eps: T) -> Result<T> {
    let n = c.len();
    let lo = c.length() / T::from_usize_lossy(n);
    let hi = c.length() / T::lit(8.0);
    if !(eps > lo && eps < hi) {
        return Err(Error::EpsOutOfRange { eps: eps.to_f64_lossy(), lo: lo.to_f64_lossy(), hi: hi.to_f64_lossy() });
    }
    let interp = HermiteLoop::new(c);
    let mut acc = T::zero();
    for i in 0..n {
        let s = interp.param(i);
        let a = interp.eval(s - eps);
        let b = c.point(i);
        let d = interp.eval(s + eps);
        let w = (interp.param(i + 1) - interp.param(i) + interp.param(i + n) - interp.param(i + n - 1)) * T::lit(0.5);
        acc += w * e.value(three_point_curvature(a, b, d));
    }
    Ok(acc)
}

/// Signed reciprocal circumradius of three points; zero for collinear triples.
pub fn three_point_curvature<T: Real>(a: Point<T>, b: Point<T>, c: Point<T>) -> T {
    let la = b.dist(c);
    let lb = a.dist(c);
    let lc = a.dist(b);
    let twice_area = (b - a).cross(c - b);
    let prod = la * lb * lc;
    if !(prod > T::zero()) || twice_area.abs() < T::tol(1e-14) * prod {
        return T::zero();
    }
    // R = abc / (4 area), area = twice_area / 2
    (twice_area + twice_area) / prod
}

/// Periodic cubic Hermite interpolant through the samples of a closed curve.
struct HermiteLoop<'a, T> {
    pts: &'a [Point<T>],
    cum: Vec<T>,
    total: T,
}

impl<'a, T: Real> HermiteLoop<'a, T> {
    fn new(c: &'a ClosedCurve<T>) -> Self {
        let pts = c.points();
        let n = pts.len();
        let mut cum = Vec::with_capacity(n + 1);
        cum.push(T::zero());
        for i in 0..n {
            let l = cum[i] + pts[i].dist(pts[(i + 1) % n]);
            cum.push(l);
        }
        let total = cum[n];
        Self { pts, cum, total }
    }

    /// Chord-length parameter of sample `i`, continued periodically.
    fn param(&self, i: usize) -> T {
        let n = self.pts.len();
        self.cum[i % n] + self.total * T::from_usize_lossy(i / n)
    }

    fn tangent(&self, i: usize) -> Point<T> {
        let n = self.pts.len();
        let prev = (i + n - 1) % n;
        let next = (i + 1) % n;
        let dt = self.param(i + n + 1) - self.param(i + n - 1);
        (self.pts[next] - self.pts[prev]) * (T::one() / dt)
    }

    fn eval(&self, s: T) -> Point<T> {
        let n = self.pts.len();
        let s = s - self.total * (s / self.total).floor();
        let idx = match self.cum.binary_search_by(|c| c.partial_cmp(&s).unwrap()) {
            Ok(i) => i.min(n - 1),
            Err(i) => i.saturating_sub(1).min(n - 1),
        };
        let h = self.cum[idx + 1] - self.cum[idx];
        let t = (s - self.cum[idx]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let h00 = two * t3 - three * t2 + T::one();
        let h10 = t3 - two * t2 + t;
        let h01 = three * t2 - two * t3;
        let h11 = t3 - t2;
        let p0 = self.pts[idx];
        let p1 = self.pts[(idx + 1) % n];
        p0 * h00 + self.tangent(idx) * (h10 * h) + p1 * h01 + self.tangent(idx + 1) * (h11 * h)
    }
}

/// Discrete inner product `h Σ u_i v_i`.
pub fn inner<T: Real>(u: &[T], v: &[T], h: T) -> T {
    u.iter().zip(v).map(|(a, b)| *a * *b).sum::<T>() * h
}

/// Discrete `L²` norm.
pub fn l2_norm<T: Real>(v: &[T], h: T) -> T {
    inner(v, v, h).sqrt()
}

/// Removes from `v` its components along `cos α` and `sin α` (Gram–Schmidt in
/// the discrete inner product).
pub fn project_closure<T: Real>(g: &GaussRep<T>, v: &mut [T]) {
    let h = g.step();
    let cos: Vec<T> = g.alpha().iter().map(|a| a.cos()).collect();
    let mut sin: Vec<T> = g.alpha().iter().map(|a| a.sin()).collect();
    let mut basis: Vec<Vec<T>> = Vec::with_capacity(2);
    let nc = l2_norm(&cos, h);
    if nc > T::tol(1e-14) {
        basis.push(cos.iter().map(|x| *x / nc).collect());
    }
    for b in &basis {
        let d = inner(&sin, b, h);
        for (s, bi) in sin.iter_mut().zip(b) {
            *s -= d * *bi;
        }
    }
    let ns = l2_norm(&sin, h);
    if ns > T::tol(1e-14) {
        basis.push(sin.iter().map(|x| *x / ns).collect());
    }
    for b in &basis {
        let d = inner(v, b, h);
        for (x, bi) in v.iter_mut().zip(b) {
            *x -= d * *bi;
        }
    }
}

/// Unprojected `L²` gradient of `U_f`: `-D[f'(κ)]` with the same central
/// difference `D` that defines `κ`.
pub fn uf_gradient_raw<T: Real>(g: &GaussRep<T>, e: &EnergyFunctional<T>) -> Vec<T> {
    let n = g.len();
    let fp: Vec<T> = discrete_curvature(g).into_iter().map(|k| e.derivative(k)).collect();
    let inv = T::one() / (g.step() + g.step());
    (0..n)
        .map(|i| -(fp[(i + 1) % n] - fp[(i + n - 1) % n]) * inv)
        .collect()
}

/// Constraint-projected `L²` gradient of `U_f` with respect to the angle samples.
pub fn uf_gradient<T: Real>(g: &GaussRep<T>, e: &EnergyFunctional<T>) -> Vec<T> {
    let mut grad = uf_gradient_raw(g, e);
    project_closure(g, &mut grad);
    grad
}

/// Least-squares Euler–Lagrange residual.
pub fn el_residual<T: Real>(g: &GaussRep<T>, e: &EnergyFunctional<T>) -> ElResidualReport<T> {
    let n = g.len();
    let h = g.step();
    let kappa = discrete_curvature(g);
    let inv_h2 = T::one() / (h * h);
    let lhs: Vec<T> = (0..n as isize)
        .map(|i| {
            let acc = (g.alpha_at(i + 1) - g.alpha_at(i) - g.alpha_at(i) + g.alpha_at(i - 1)) * inv_h2;
            e.second_derivative(kappa[i as usize]) * acc
        })
        .collect();
    let (mut scc, mut sss, mut scs, mut scy, mut ssy) = (T::zero(), T::zero(), T::zero(), T::zero(), T::zero());
    for (a, y) in g.alpha().iter().zip(&lhs) {
        let (s, c) = a.sin_cos();
        scc += c * c;
        sss += s * s;
        scs += c * s;
        scy += c * *y;
        ssy += s * *y;
    }
    let det = scc * sss - scs * scs;
    let (c1, c2) = if det.abs() > T::tol(1e-14) * (scc * sss).max(T::one()) {
        ((scy * sss - ssy * scs) / det, (ssy * scc - scy * scs) / det)
    } else if scc + sss > T::zero() {
        // cos α and sin α are parallel (α constant mod π): a single direction
        let norm = scc + sss;
        let proj = (scy + ssy) / norm;
        (proj, proj)
    } else {
        (T::zero(), T::zero())
    };
    let ss: T = g
        .alpha()
        .iter()
        .zip(&lhs)
        .map(|(a, y)| {
            let (s, c) = a.sin_cos();
            let r = *y - c1 * c - c2 * s;
            r * r
        })
        .sum();
    ElResidualReport { c1, c2, rms_residual: (ss / T::from_usize_lossy(n)).sqrt() }
}

/// `U_f` of a closed curve via its Gauss representation.
pub fn curve_energy<T: Real>(c: &ClosedCurve<T>, e: &EnergyFunctional<T>) -> T {
    energy_uf(&gauss_from_curve(c), e)
}
