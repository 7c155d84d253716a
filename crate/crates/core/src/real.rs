//! Scalar abstraction and planar points.
//!
//! Every geometric and analytic routine in the crate is written against
//! [`Real`], which `f32` and `f64` both implement. Tolerances in the crate are
//! expressed as `f64` literals and converted with [`Real::lit`]; for `f32` they
//! are clamped from below by a small multiple of machine epsilon so that the
//! same code paths stay meaningful at lower precision.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar used throughout the crate.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts an `f64` tolerance, never going below `64 * epsilon`.
    #[inline]
    fn tol(x: f64) -> Self {
        Self::lit(x).max(Self::epsilon() * Self::lit(64.0))
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn two_pi() -> Self {
        Self::TAU()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Reduces an angle into `(-π, π]`.
pub fn wrap_angle<T: Real>(a: T) -> T {
    let two_pi = T::two_pi();
    let mut r = a - two_pi * (a / two_pi).round();
    if r <= -T::PI() {
        r += two_pi;
    } else if r > T::PI() {
        r -= two_pi;
    }
    r
}

/// A point (or vector) in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Point<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    /// Unit vector at angle `a`.
    #[inline]
    pub fn unit(a: T) -> Self {
        Self::new(a.cos(), a.sin())
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn dist(self, o: Self) -> T {
        (self - o).norm()
    }

    #[inline]
    pub fn angle(self) -> T {
        self.y.atan2(self.x)
    }

    #[inline]
    pub fn lerp(self, o: Self, t: T) -> Self {
        self + (o - self) * t
    }

    /// Rotation by angle `a` about the origin.
    #[inline]
    pub fn rotate(self, a: T) -> Self {
        let (s, c) = a.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn cast<U: Real>(self) -> Point<U> {
        Point::new(U::lit(self.x.to_f64_lossy()), U::lit(self.y.to_f64_lossy()))
    }

    pub fn to_array(self) -> [f64; 2] {
        [self.x.to_f64_lossy(), self.y.to_f64_lossy()]
    }

    pub fn from_array(a: [f64; 2]) -> Self {
        Self::new(T::lit(a[0]), T::lit(a[1]))
    }
}

impl<T: Real> Add for Point<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Real> AddAssign for Point<T> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl<T: Real> Sub for Point<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Real> SubAssign for Point<T> {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        self.x -= o.x;
        self.y -= o.y;
    }
}

impl<T: Real> Mul<T> for Point<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl<T: Real> Neg for Point<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// Signed shoelace area of a closed polygon (positive when counterclockwise).
pub fn signed_area<T: Real>(pts: &[Point<T>]) -> T {
    let n = pts.len();
    if n < 3 {
        return T::zero();
    }
    let origin = pts[0];
    let mut acc = T::zero();
    for i in 1..n - 1 {
        acc += (pts[i] - origin).cross(pts[i + 1] - origin);
    }
    acc * T::lit(0.5)
}

/// Symmetric Hausdorff distance between two point sets.
pub fn hausdorff<T: Real>(a: &[Point<T>], b: &[Point<T>]) -> T {
    fn directed<T: Real>(a: &[Point<T>], b: &[Point<T>]) -> T {
        a.iter()
            .map(|p| {
                b.iter()
                    .map(|q| p.dist(*q))
                    .fold(T::infinity(), T::min)
            })
            .fold(T::zero(), T::max)
    }
    directed(a, b).max(directed(b, a))
}

/// Distance from a point to the segment `[a, b]`.
pub fn point_segment_distance<T: Real>(p: Point<T>, a: Point<T>, b: Point<T>) -> T {
    let d = b - a;
    let len2 = d.norm_sq();
    if len2 <= T::zero() {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / len2).max(T::zero()).min(T::one());
    p.dist(a + d * t)
}

/// Hausdorff distance between a point set and a closed polyline.
pub fn hausdorff_to_polyline<T: Real>(pts: &[Point<T>], poly: &[Point<T>]) -> T {
    let n = poly.len();
    let to_poly = pts
        .iter()
        .map(|p| {
            (0..n)
                .map(|i| point_segment_distance(*p, poly[i], poly[(i + 1) % n]))
                .fold(T::infinity(), T::min)
        })
        .fold(T::zero(), T::max);
    let from_poly = poly
        .iter()
        .map(|q| {
            let m = pts.len();
            (0..m)
                .map(|i| point_segment_distance(*q, pts[i], pts[(i + 1) % m]))
                .fold(T::infinity(), T::min)
        })
        .fold(T::zero(), T::max);
    to_poly.max(from_poly)
}
