//! Sampled closed planar curves and their Gauss (turning-angle) representation.
//!
//! A [`ClosedCurve`] is a cyclic sequence of points, nominally uniform in
//! arclength. A [`GaussRep`] stores the tangent angle `α` on a uniform grid of
//! the arclength parameter together with the base point `γ(0)`; the tangent is
//! `(cos α, sin α)` and the curvature is `α̇`.
//!
//! The grid spacing of a Gauss representation is `length / N`. For the
//! normalized length `2π` this is `2π / N`; keeping the physical spacing for
//! other lengths makes every energy scale the way the continuum energy does.

use crate::error::{Error, Result};
use crate::real::{hausdorff, hausdorff_to_polyline, wrap_angle, Point, Real};

/// Minimum number of samples of a closed curve.
pub const MIN_SAMPLES: usize = 8;

/// Closure integrals below this multiple of `2π` count as closed.
const CLOSURE_SNAP: f64 = 1e-8;

/// A closed planar polyline sampled (approximately) uniformly in arclength.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedCurve<T> {
    points: Vec<Point<T>>,
    length: T,
    closure_gap: T,
}

impl<T: Real> ClosedCurve<T> {
    /// Wraps a cyclic point sequence; the stored length is the polygonal length.
    pub fn new(points: Vec<Point<T>>) -> Result<Self> {
        if points.len() < MIN_SAMPLES {
            return Err(Error::TooFewSamples { min: MIN_SAMPLES, got: points.len() });
        }
        let length = polygon_length(&points);
        if !(length > T::zero()) {
            return Err(Error::DegeneratePolyline);
        }
        Ok(Self { points, length, closure_gap: T::zero() })
    }

    pub(crate) fn with_gap(points: Vec<Point<T>>, gap: T) -> Self {
        let length = polygon_length(&points);
        Self { points, length, closure_gap: gap }
    }

    #[inline]
    pub fn points(&self) -> &[Point<T>] {
        &self.points
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn length(&self) -> T {
        self.length
    }

    /// Distance between the reconstructed end point and the start point; zero
    /// for curves that close.
    #[inline]
    pub fn closure_gap(&self) -> T {
        self.closure_gap
    }

    #[inline]
    pub fn point(&self, i: usize) -> Point<T> {
        self.points[i % self.points.len()]
    }

    pub fn segment_lengths(&self) -> Vec<T> {
        let n = self.points.len();
        (0..n).map(|i| self.points[i].dist(self.points[(i + 1) % n])).collect()
    }

    /// Ratio of the longest to the shortest segment.
    pub fn spacing_ratio(&self) -> T {
        let seg = self.segment_lengths();
        let max = seg.iter().copied().fold(T::zero(), T::max);
        let min = seg.iter().copied().fold(T::infinity(), T::min);
        max / min
    }

    pub fn centroid(&self) -> Point<T> {
        let n = T::from_usize_lossy(self.points.len());
        let s = self.points.iter().fold(Point::zero(), |a, p| a + *p);
        s * (T::one() / n)
    }

    /// Applies `f` to every point.
    pub fn map_points(&self, f: impl Fn(Point<T>) -> Point<T>) -> Self {
        let points: Vec<_> = self.points.iter().map(|p| f(*p)).collect();
        Self::with_gap(points, self.closure_gap)
    }

    /// Homothety about the origin.
    pub fn scaled(&self, s: T) -> Self {
        let mut c = self.map_points(|p| p * s);
        c.closure_gap = self.closure_gap * s.abs();
        c
    }

    pub fn translated(&self, v: Point<T>) -> Self {
        self.map_points(|p| p + v)
    }

    pub fn rotated(&self, a: T) -> Self {
        self.map_points(|p| p.rotate(a))
    }

    /// Homothety about the centroid that brings the polygonal length to `target`.
    pub fn rescaled_to_length(&self, target: T) -> Self {
        let c = self.centroid();
        let s = target / self.length;
        let mut out = self.map_points(|p| c + (p - c) * s);
        out.closure_gap = self.closure_gap * s;
        out
    }

    /// Same image traversed backwards, keeping sample 0 as the start.
    pub fn reversed(&self) -> Self {
        let n = self.points.len();
        let points = (0..n).map(|i| self.points[(n - i) % n]).collect();
        Self::with_gap(points, self.closure_gap)
    }

    /// Moves the start point `k` samples forward.
    pub fn cyclic_shift(&self, k: usize) -> Self {
        let n = self.points.len();
        let points = (0..n).map(|i| self.points[(i + k) % n]).collect();
        Self::with_gap(points, self.closure_gap)
    }

    /// Unit tangent at sample `i` from the central difference of its neighbours.
    pub fn tangent_angle(&self, i: usize) -> T {
        let n = self.points.len();
        let d = self.points[(i + 1) % n] - self.points[(i + n - 1) % n];
        d.angle()
    }
}

fn polygon_length<T: Real>(pts: &[Point<T>]) -> T {
    let n = pts.len();
    (0..n).map(|i| pts[i].dist(pts[(i + 1) % n])).sum()
}

/// Turning-angle representation of a curve.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussRep<T> {
    alpha: Vec<T>,
    base: Point<T>,
    step: T,
}

impl<T: Real> GaussRep<T> {
    /// Builds a representation on the normalized period `2π`.
    pub fn new(alpha: Vec<T>, base: Point<T>) -> Result<Self> {
        let n = alpha.len();
        let step = T::two_pi() / T::from_usize_lossy(n.max(1));
        Self::with_step(alpha, base, step)
    }

    /// Builds a representation whose grid spacing is `step`.
    pub fn with_step(alpha: Vec<T>, base: Point<T>, step: T) -> Result<Self> {
        if alpha.len() < MIN_SAMPLES {
            return Err(Error::TooFewSamples { min: MIN_SAMPLES, got: alpha.len() });
        }
        if !(step > T::zero()) {
            return Err(Error::Invalid("grid step must be positive".into()));
        }
        for i in 0..alpha.len() - 1 {
            if (alpha[i + 1] - alpha[i]).abs() >= T::PI() {
                return Err(Error::NotRegular(i));
            }
        }
        Ok(Self { alpha, base, step })
    }

    #[inline]
    pub fn alpha(&self) -> &[T] {
        &self.alpha
    }

    #[inline]
    pub fn base(&self) -> Point<T> {
        self.base
    }

    #[inline]
    pub fn step(&self) -> T {
        self.step
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// Parameter length of the period, `N * step`.
    pub fn period(&self) -> T {
        self.step * T::from_usize_lossy(self.alpha.len())
    }

    /// The lift continued one step past the last sample, i.e. `α` at the end
    /// of the period.
    pub fn alpha_end(&self) -> T {
        let n = self.alpha.len();
        let last = self.alpha[n - 1];
        last + wrap_angle(self.alpha[0] - last)
    }

    /// `α_end - α[0]`.
    pub fn lift_defect(&self) -> T {
        self.alpha_end() - self.alpha[0]
    }

    /// Number of full tangent turns.
    pub fn winding(&self) -> i64 {
        (self.lift_defect() / T::two_pi()).round().to_i64().unwrap_or(0)
    }

    /// Sample `i` of the periodic lift; indices outside `0..N` pick up
    /// multiples of the lift defect.
    pub fn alpha_at(&self, i: isize) -> T {
        let n = self.alpha.len() as isize;
        let q = i.div_euclid(n);
        let r = i.rem_euclid(n) as usize;
        self.alpha[r] + self.lift_defect() * T::from_isize(q).unwrap()
    }

    /// Same representation with new angle samples and the same base and step.
    pub fn with_alpha(&self, alpha: Vec<T>) -> Result<Self> {
        Self::with_step(alpha, self.base, self.step)
    }
}

/// Closure diagnostics of a Gauss representation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosureReport<T> {
    pub cos_integral: T,
    pub sin_integral: T,
    pub angle_defect_mod_2pi: T,
    pub whitney: i64,
}

impl<T: Real> ClosureReport<T> {
    /// Length of the closure gap vector.
    pub fn gap(&self) -> T {
        self.cos_integral.hypot(self.sin_integral)
    }
}

/// Resamples a closed polyline to `n` points equally spaced along it.
///
/// Points are first placed uniformly in the arclength of the input polyline,
/// then nudged along it until consecutive chords have equal length, so the
/// output is equilateral even where the input has corners.
pub fn resample_arclength<T: Real>(points: &[Point<T>], n: usize) -> Result<ClosedCurve<T>> {
    if n < MIN_SAMPLES {
        return Err(Error::TooFewSamples { min: MIN_SAMPLES, got: n });
    }
    let mut pts: Vec<Point<T>> = Vec::with_capacity(points.len());
    for p in points {
        if pts.last().is_none_or(|q: &Point<T>| q.dist(*p) > T::zero()) {
            pts.push(*p);
        }
    }
    while pts.len() > 1 && pts[0].dist(pts[pts.len() - 1]) <= T::zero() {
        pts.pop();
    }
    if pts.len() < 3 {
        return Err(Error::DegeneratePolyline);
    }
    let m = pts.len();
    let mut cum = Vec::with_capacity(m + 1);
    cum.push(T::zero());
    for i in 0..m {
        let l = *cum.last().unwrap() + pts[i].dist(pts[(i + 1) % m]);
        cum.push(l);
    }
    let total = cum[m];
    if !(total > T::zero()) || signed_area_span(&pts) <= T::zero() {
        return Err(Error::DegeneratePolyline);
    }

    let eval = |s: T| -> Point<T> {
        let s = s - total * (s / total).floor();
        // last index with cum[idx] <= s
        let idx = match cum.binary_search_by(|c| c.partial_cmp(&s).unwrap()) {
            Ok(i) => i.min(m - 1),
            Err(i) => i.saturating_sub(1).min(m - 1),
        };
        let seg = cum[idx + 1] - cum[idx];
        let t = if seg > T::zero() { (s - cum[idx]) / seg } else { T::zero() };
        pts[idx].lerp(pts[(idx + 1) % m], t)
    };

    let nt = T::from_usize_lossy(n);
    let mut gaps: Vec<T> = vec![total / nt; n];
    let mut out: Vec<Point<T>> = Vec::new();
    for _ in 0..60 {
        let mut s = T::zero();
        out.clear();
        for g in &gaps {
            out.push(eval(s));
            s += *g;
        }
        let chords: Vec<T> = (0..n).map(|i| out[i].dist(out[(i + 1) % n])).collect();
        let mean = chords.iter().copied().sum::<T>() / nt;
        let max = chords.iter().copied().fold(T::zero(), T::max);
        let min = chords.iter().copied().fold(T::infinity(), T::min);
        if max / min - T::one() < T::tol(1e-9) {
            break;
        }
        let mut sum = T::zero();
        for (g, c) in gaps.iter_mut().zip(&chords) {
            let ratio = if *c > T::zero() { mean / *c } else { T::lit(2.0) };
            *g *= ratio.min(T::lit(2.0)).max(T::lit(0.5));
            sum += *g;
        }
        for g in gaps.iter_mut() {
            *g *= total / sum;
        }
    }
    ClosedCurve::new(out)
}

/// Spread of the point set; zero when all points lie on one line.
fn signed_area_span<T: Real>(pts: &[Point<T>]) -> T {
    let o = pts[0];
    pts.iter()
        .map(|p| (*p - o).norm())
        .fold(T::zero(), T::max)
}

/// Tangent-angle lift of a closed curve by central differences.
pub fn gauss_from_curve<T: Real>(c: &ClosedCurve<T>) -> GaussRep<T> {
    let n = c.len();
    let mut alpha = Vec::with_capacity(n);
    let mut prev = c.tangent_angle(0);
    alpha.push(prev);
    for i in 1..n {
        let raw = c.tangent_angle(i);
        let next = prev + wrap_angle(raw - prev);
        alpha.push(next);
        prev = next;
    }
    let step = c.length() / T::from_usize_lossy(n);
    GaussRep { alpha, base: c.point(0), step }
}

/// Rebuilds points by trapezoidal integration of the unit tangent.
///
/// If the closure integrals vanish (to `1e-8 * 2π`) the result is a closed
/// curve; otherwise the open polyline is returned and its gap is recorded in
/// [`ClosedCurve::closure_gap`].
pub fn curve_from_gauss<T: Real>(g: &GaussRep<T>) -> ClosedCurve<T> {
    let n = g.len();
    let half = g.step * T::lit(0.5);
    let mut pts = Vec::with_capacity(n + 1);
    let mut p = g.base;
    pts.push(p);
    for i in 0..n {
        let a0 = g.alpha_at(i as isize);
        let a1 = g.alpha_at(i as isize + 1);
        p += (Point::unit(a0) + Point::unit(a1)) * half;
        pts.push(p);
    }
    let end = pts.pop().unwrap();
    let gap = end.dist(g.base);
    let snap = T::tol(CLOSURE_SNAP) * T::two_pi();
    let report = closure_report(g);
    if report.gap() <= snap {
        ClosedCurve::with_gap(pts, T::zero())
    } else {
        ClosedCurve::with_gap(pts, gap)
    }
}

/// Closure integrals and winding data of a Gauss representation.
pub fn closure_report<T: Real>(g: &GaussRep<T>) -> ClosureReport<T> {
    let (mut c, mut s) = (T::zero(), T::zero());
    for a in g.alpha() {
        let (sa, ca) = a.sin_cos();
        c += ca;
        s += sa;
    }
    let defect = g.lift_defect();
    ClosureReport {
        cos_integral: c * g.step(),
        sin_integral: s * g.step(),
        angle_defect_mod_2pi: wrap_angle(defect),
        whitney: g.winding(),
    }
}

/// Whitney (rotation) index of a regular closed curve.
pub fn whitney_index<T: Real>(c: &ClosedCurve<T>) -> Result<i64> {
    let n = c.len();
    let pts = c.points();
    let dir = |i: usize| (pts[(i + 1) % n] - pts[i]).angle();
    for i in 0..n {
        let turn = wrap_angle(dir((i + 1) % n) - dir(i));
        if turn.abs() >= T::FRAC_PI_2() {
            return Err(Error::NotRegular((i + 1) % n));
        }
    }
    Ok(gauss_from_curve(c).winding())
}

/// Hausdorff distance between the images of two curves after the best
/// rotation and reflection, with centroids superposed.
pub fn aligned_hausdorff<T: Real>(a: &ClosedCurve<T>, b: &ClosedCurve<T>) -> T {
    let ca = a.centroid();
    let cb = b.centroid();
    let pa: Vec<Point<T>> = a.points().iter().map(|p| *p - ca).collect();
    let pb: Vec<Point<T>> = b.points().iter().map(|p| *p - cb).collect();
    let coarse = |pts: &[Point<T>]| -> Vec<Point<T>> {
        let step = (pts.len() / 128).max(1);
        pts.iter().step_by(step).copied().collect()
    };
    let sa = coarse(&pa);
    let sb = coarse(&pb);
    let place = |pts: &[Point<T>], mirror: bool, angle: T| -> Vec<Point<T>> {
        pts.iter().map(|p| if mirror { Point::new(p.x, -p.y) } else { *p }.rotate(angle)).collect()
    };
    let steps = 720;
    let h = T::two_pi() / T::from_usize_lossy(steps);
    let mut best = T::infinity();
    for mirror in [false, true] {
        let mut coarse_vals: Vec<(T, T)> = (0..steps)
            .map(|k| {
                let angle = h * T::from_usize_lossy(k);
                (hausdorff(&place(&sb, mirror, angle), &sa), angle)
            })
            .collect();
        coarse_vals.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        for &(_, centre) in coarse_vals.iter().take(3) {
            let full = |angle: T| hausdorff_to_polyline(&place(&pb, mirror, angle), &pa);
            let (mut lo, mut hi) = (centre - h, centre + h);
            for _ in 0..40 {
                let m1 = lo + (hi - lo) / T::lit(3.0);
                let m2 = hi - (hi - lo) / T::lit(3.0);
                if full(m1) <= full(m2) {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            best = best.min(full((lo + hi) * T::lit(0.5)));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn circle(n: usize, turns: f64, ccw: bool) -> ClosedCurve<f64> {
        let r = 1.0 / turns;
        let sgn = if ccw { 1.0 } else { -1.0 };
        let pts = (0..n)
            .map(|i| {
                let t = sgn * turns * TAU * i as f64 / n as f64;
                Point::new(r * t.cos(), r * t.sin())
            })
            .collect();
        ClosedCurve::new(pts).unwrap()
    }

    #[test]
    fn square_resamples_to_unit_spacing() {
        let sq: Vec<Point<f64>> = [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)]
            .iter()
            .map(|&(x, y)| Point::new(x, y))
            .collect();
        let c = resample_arclength(&sq, 8).unwrap();
        for s in c.segment_lengths() {
            assert!((s - 1.0).abs() < 1e-12, "{s}");
        }
        assert!((c.length() - 8.0).abs() < 1e-9 * 8.0);
    }

    #[test]
    fn circle_resample_stays_on_circle() {
        let pts: Vec<Point<f64>> = (0..1000)
            .map(|i| Point::unit(TAU * i as f64 / 1000.0))
            .collect();
        let c = resample_arclength(&pts, 512).unwrap();
        assert_eq!(c.len(), 512);
        for p in c.points() {
            assert!((p.norm() - 1.0).abs() < 1e-5);
        }
        assert!(c.spacing_ratio() - 1.0 < 1e-3);
        let input_len: f64 = (0..1000).map(|i| pts[i].dist(pts[(i + 1) % 1000])).sum();
        assert!(((c.length() - input_len) / input_len).abs() < 1e-5);
    }

    #[test]
    fn degenerate_inputs_rejected() {
        let p = Point::new(1.0, 2.0);
        assert_eq!(resample_arclength(&[p, p, p, p], 16).unwrap_err(), Error::DegeneratePolyline);
        let line: Vec<Point<f64>> = (0..2).map(|i| Point::new(i as f64, 0.0)).collect();
        assert_eq!(resample_arclength(&line, 16).unwrap_err(), Error::DegeneratePolyline);
        assert!(matches!(
            resample_arclength(&[Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)], 4),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn circle_lift_and_orientation() {
        let n = 256;
        let g = gauss_from_curve(&circle(n, 1.0, true));
        for (i, a) in g.alpha().iter().enumerate() {
            let expect = PI / 2.0 + TAU * i as f64 / n as f64;
            assert!((a - expect).abs() < 1e-9);
        }
        assert!((g.lift_defect() - TAU).abs() < 1e-9);
        let g = gauss_from_curve(&circle(n, 1.0, false));
        assert!((g.lift_defect() + TAU).abs() < 1e-9);
    }

    #[test]
    fn straight_alpha_does_not_close() {
        let g = GaussRep::new(vec![0.0; 64], Point::zero()).unwrap();
        let c = curve_from_gauss(&g);
        assert!((c.closure_gap() - TAU).abs() < 1e-12);
        let r = closure_report(&g);
        assert!((r.cos_integral - TAU).abs() < 1e-12);
        assert_eq!(r.sin_integral, 0.0);
        assert_eq!(r.whitney, 0);
    }

    #[test]
    fn linear_alpha_gives_unit_circle() {
        let n = 512;
        let alpha = (0..n).map(|i| PI / 2.0 + TAU * i as f64 / n as f64).collect();
        let g = GaussRep::new(alpha, Point::new(1.0, 0.0)).unwrap();
        let c = curve_from_gauss(&g);
        assert_eq!(c.closure_gap(), 0.0);
        for p in c.points() {
            assert!((p.norm() - 1.0).abs() < 1e-4);
        }
        let r = closure_report(&g);
        assert!(r.cos_integral.abs() < 1e-12 && r.sin_integral.abs() < 1e-12);
        assert_eq!(r.whitney, 1);
    }

    #[test]
    fn whitney_of_circles() {
        assert_eq!(whitney_index(&circle(128, 1.0, true)).unwrap(), 1);
        assert_eq!(whitney_index(&circle(128, 1.0, false)).unwrap(), -1);
        assert_eq!(whitney_index(&circle(256, 2.0, true)).unwrap(), 2);
        assert_eq!(whitney_index(&circle(512, 2.0, true)).unwrap(), 2);
    }

    #[test]
    fn cusp_is_reported() {
        let mut pts: Vec<Point<f64>> = (0..32).map(|i| Point::unit(TAU * i as f64 / 32.0)).collect();
        pts[5] = Point::new(3.0, 3.0);
        let c = ClosedCurve::new(pts).unwrap();
        assert!(matches!(whitney_index(&c), Err(Error::NotRegular(_))));
    }

    #[test]
    fn lift_must_be_continuous() {
        let mut a = vec![0.0; 16];
        a[7] = 3.5;
        assert!(matches!(GaussRep::new(a, Point::zero()), Err(Error::NotRegular(6))));
    }

    #[test]
    fn f32_circle_round_trip() {
        let n = 128;
        let pts: Vec<Point<f32>> = (0..n)
            .map(|i| Point::unit(std::f32::consts::TAU * i as f32 / n as f32))
            .collect();
        let c = ClosedCurve::new(pts).unwrap();
        let g = gauss_from_curve(&c);
        assert_eq!(g.winding(), 1);
        let back = curve_from_gauss(&g);
        assert!(back.closure_gap() < 1e-3);
    }
}
