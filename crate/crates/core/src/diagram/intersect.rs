//! Self-intersections of a closed polyline.
//!
//! Segments are swept in order of their left end; each candidate pair is
//! tested exactly once. Segment `i` runs from sample `i` to sample `i + 1` and
//! owns the half-open parameter range `[0, 1)`, so a crossing through a sample
//! point is reported on the segment that starts there.

use crate::curve::ClosedCurve;
use crate::error::{Error, Result};
use crate::real::{point_segment_distance, Point, Real};

/// Absolute distance below which two pieces of the curve count as touching.
pub const CODIM_TOL: f64 = 1e-9;

/// One passage of the curve through a crossing: segment index plus the
/// fraction along that segment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Passage<T> {
    pub segment: usize,
    pub t: T,
}

impl<T: Real> Passage<T> {
    /// Position along the curve in units of samples.
    pub fn param(&self) -> T {
        T::from_usize_lossy(self.segment) + self.t
    }
}

/// A transversal double point before crossing types are assigned; `a` is the
/// passage that comes first along the curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RawCrossing<T> {
    pub position: Point<T>,
    pub a: Passage<T>,
    pub b: Passage<T>,
    /// Angle between the two strands, in `(0, π)`.
    pub angle: T,
}

/// Intersection point of segments `i` and `j` of `pts` (no range checks).
pub fn segment_intersection<T: Real>(pts: &[Point<T>], i: usize, j: usize) -> Option<(T, T, Point<T>)> {
    let n = pts.len();
    let p = pts[i];
    let r = pts[(i + 1) % n] - p;
    let q = pts[j];
    let s = pts[(j + 1) % n] - q;
    let denom = r.cross(s);
    if denom == T::zero() {
        return None;
    }
    let qp = q - p;
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    Some((t, u, p + r * t))
}

fn codim(kind: &str, p: Point<f64>) -> Error {
    Error::CodimensionOne { kind: kind.to_string(), x: p.x, y: p.y }
}

/// All transversal self-intersections of a closed curve, sorted by the
/// parameter of their first passage.
///
/// Tangential contact, overlapping segments and triple points (within
/// [`CODIM_TOL`]) are reported as [`Error::CodimensionOne`].
pub fn find_intersections<T: Real>(c: &ClosedCurve<T>) -> Result<Vec<RawCrossing<T>>> {
    let pts = c.points();
    let n = pts.len();
    let tol = T::tol(CODIM_TOL);

    let mut order: Vec<usize> = (0..n).collect();
    let min_x = |i: usize| pts[i].x.min(pts[(i + 1) % n].x);
    let max_x = |i: usize| pts[i].x.max(pts[(i + 1) % n].x);
    order.sort_by(|&a, &b| min_x(a).partial_cmp(&min_x(b)).unwrap());

    let adjacent = |i: usize, j: usize| {
        let d = if i > j { i - j } else { j - i };
        d <= 1 || d == n - 1
    };

    let mut raw: Vec<RawCrossing<T>> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    for &j in &order {
        let x0 = min_x(j);
        active.retain(|&i| max_x(i) + tol >= x0);
        let (jy0, jy1) = (pts[j].y.min(pts[(j + 1) % n].y), pts[j].y.max(pts[(j + 1) % n].y));
        for &i in &active {
            if adjacent(i, j) {
                continue;
            }
            let (iy0, iy1) = (pts[i].y.min(pts[(i + 1) % n].y), pts[i].y.max(pts[(i + 1) % n].y));
            if iy1 + tol < jy0 || jy1 + tol < iy0 {
                continue;
            }
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            test_pair(pts, lo, hi, tol, &mut raw)?;
        }
        active.push(j);
    }

    raw.sort_by(|x, y| x.a.param().partial_cmp(&y.a.param()).unwrap());
    merge_and_check(raw, n, tol)
}

fn test_pair<T: Real>(pts: &[Point<T>], i: usize, j: usize, tol: T, out: &mut Vec<RawCrossing<T>>) -> Result<()> {
    let n = pts.len();
    let (a0, a1) = (pts[i], pts[(i + 1) % n]);
    let (b0, b1) = (pts[j], pts[(j + 1) % n]);
    let r = a1 - a0;
    let s = b1 - b0;
    let sin = r.cross(s) / (r.norm() * s.norm());
    if sin.abs() < tol {
        // (nearly) parallel: touching means overlap
        let d = point_segment_distance(b0, a0, a1)
            .min(point_segment_distance(b1, a0, a1))
            .min(point_segment_distance(a0, b0, b1))
            .min(point_segment_distance(a1, b0, b1));
        if d < tol {
            return Err(codim("tangency", a0.cast::<f64>()));
        }
        return Ok(());
    }
    // Crossing by orientation signs, zero counted as positive. The side of a
    // sample relative to a segment's line is computed once per triple, so
    // the two segments meeting at a sample agree about it and a crossing
    // through a sample is found exactly once.
    let side = |a: Point<T>, b: Point<T>, c: Point<T>| (b - a).cross(c - a) >= T::zero();
    if side(b0, b1, a0) == side(b0, b1, a1) || side(a0, a1, b0) == side(a0, a1, b1) {
        return Ok(());
    }
    let Some((t, u, p)) = segment_intersection(pts, i, j) else {
        return Ok(());
    };
    let zero = T::zero();
    let below_one = T::one() - T::epsilon();
    let (t, u) = (t.max(zero).min(below_one), u.max(zero).min(below_one));
    let angle = sin.abs().asin();
    let angle = if r.dot(s) < zero { T::PI() - angle } else { angle };
    if angle < tol || T::PI() - angle < tol {
        return Err(codim("tangency", p.cast::<f64>()));
    }
    out.push(RawCrossing {
        position: p,
        a: Passage { segment: i, t },
        b: Passage { segment: j, t: u },
        angle,
    });
    Ok(())
}

/// Rejects distinct crossings that coincide. Two crossings at one point
/// whose passages run along neighbouring segments are the two crossings of a
/// tight bigon and are kept.
fn merge_and_check<T: Real>(raw: Vec<RawCrossing<T>>, n: usize, tol: T) -> Result<Vec<RawCrossing<T>>> {
    let near = |a: usize, b: usize| {
        let d = if a > b { a - b } else { b - a };
        d <= 1 || d == n - 1
    };
    for (k, c) in raw.iter().enumerate() {
        for o in &raw[..k] {
            if o.position.dist(c.position) < tol {
                let bigon = (near(o.a.segment, c.a.segment) && near(o.b.segment, c.b.segment))
                    || (near(o.a.segment, c.b.segment) && near(o.b.segment, c.a.segment));
                if !bigon {
                    return Err(codim("triple point", c.position.cast::<f64>()));
                }
            }
        }
    }
    Ok(raw)
}
