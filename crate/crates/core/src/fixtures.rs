//! Reference curves and diagrams used by tests, the acceptance suite and the
//! command-line tool.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::{resample_arclength, ClosedCurve};
use crate::diagram::{detect_crossings, CrossingRule, KnotDiagram};
use crate::real::{Point, Real};

fn sampled<T: Real>(n: usize, dense: usize, f: impl Fn(f64) -> (f64, f64)) -> ClosedCurve<T> {
    let pts: Vec<Point<T>> = (0..dense)
        .map(|i| {
            let (x, y) = f(std::f64::consts::TAU * i as f64 / dense as f64);
            Point::new(T::lit(x), T::lit(y))
        })
        .collect();
    resample_arclength(&pts, n).expect("fixture curve is regular").rescaled_to_length(T::two_pi())
}

/// The standard trefoil projection `(sin t + 2 sin 2t, cos t - 2 cos 2t)`,
/// arclength-sampled at `n` points, length `2π`.
pub fn trefoil<T: Real>(n: usize) -> ClosedCurve<T> {
    sampled(n, 8 * n.max(512), |t| ((t).sin() + 2.0 * (2.0 * t).sin(), t.cos() - 2.0 * (2.0 * t).cos()))
}

/// Alternating trefoil diagram.
pub fn trefoil_diagram<T: Real>(n: usize) -> KnotDiagram<T> {
    detect_crossings(&trefoil(n), &CrossingRule::Alternating).expect("trefoil is generic")
}

/// Circle of radius 1 with `n` samples.
pub fn circle<T: Real>(n: usize) -> ClosedCurve<T> {
    sampled(n, 8 * n.max(512), |t| (t.cos(), t.sin())).rescaled_to_length(T::two_pi())
}

/// Ellipse with semi-axes in ratio `a : b`, length `2π`.
pub fn ellipse<T: Real>(n: usize, a: f64, b: f64) -> ClosedCurve<T> {
    sampled(n, 32 * n.max(512), |t| (a * t.cos(), b * t.sin()))
}

/// Figure-eight `(sin t, sin 2t / 2)` of length `2π`.
pub fn figure_eight<T: Real>(n: usize) -> ClosedCurve<T> {
    sampled(n, 8 * n.max(512), |t| (t.sin(), 0.5 * (2.0 * t).sin()))
}

/// Radial noise: a random combination of Fourier modes `2..=modes` with
/// total amplitude about `amp`.
fn radial_noise(seed: u64, modes: usize, amp: f64) -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (2..=modes)
        .map(|k| {
            let a = rng.random_range(-1.0..1.0) * amp / (modes as f64 - 1.0);
            (k as f64, a, rng.random_range(0.0..std::f64::consts::TAU))
        })
        .collect()
}

/// Unit circle with a smooth seeded perturbation of relative size `amp`.
pub fn noisy_circle<T: Real>(n: usize, amp: f64, seed: u64) -> ClosedCurve<T> {
    let noise = radial_noise(seed, 6, amp);
    sampled(n, 8 * n.max(512), move |t| {
        let r = 1.0 + noise.iter().map(|(k, a, p)| a * (k * t + p).sin()).sum::<f64>();
        (r * t.cos(), r * t.sin())
    })
}

/// Figure-eight with a smooth seeded normal perturbation of size `amp`.
pub fn noisy_figure_eight<T: Real>(n: usize, amp: f64, seed: u64) -> ClosedCurve<T> {
    let noise = radial_noise(seed, 6, amp);
    sampled(n, 8 * n.max(512), move |t| {
        let (x, y) = (t.sin(), 0.5 * (2.0 * t).sin());
        let (dx, dy) = (t.cos(), (2.0 * t).cos());
        let norm = (dx * dx + dy * dy).sqrt();
        let d = noise.iter().map(|(k, a, p)| a * (k * t + p).sin()).sum::<f64>();
        (x - d * dy / norm, y + d * dx / norm)
    })
}

/// A random closed curve: a Fourier series with `harmonics` terms and
/// decaying coefficients, arclength-sampled at `n` points.
pub fn random_curve<T: Real>(n: usize, harmonics: usize, seed: u64) -> ClosedCurve<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coef: Vec<[f64; 4]> = (1..=harmonics)
        .map(|k| {
            let s = 1.0 / k as f64;
            [0; 4].map(|_| rng.random_range(-1.0..1.0) * s)
        })
        .collect();
    sampled(n, 16 * n.max(512), move |t| {
        coef.iter().enumerate().fold((0.0, 0.0), |(x, y), (i, c)| {
            let k = (i + 1) as f64;
            let (s, co) = (k * t).sin_cos();
            (x + c[0] * co + c[1] * s, y + c[2] * co + c[3] * s)
        })
    })
}

/// A random generic diagram with between `min` and `max` crossings and
/// random crossing types, drawn deterministically from `seed`.
pub fn random_diagram<T: Real>(n: usize, min: usize, max: usize, seed: u64) -> KnotDiagram<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let harmonics = rng.random_range(2..=4);
        let c = random_curve::<T>(n, harmonics, rng.random_range(0..u64::MAX));
        let Ok(d) = detect_crossings(&c, &CrossingRule::FirstOver) else { continue };
        let k = d.crossing_count();
        if k < min || k > max {
            continue;
        }
        let flags = (0..k).map(|_| rng.random_bool(0.5)).collect();
        if let Ok(d) = detect_crossings(&c, &CrossingRule::PerCrossing(flags)) {
            return d;
        }
    }
}

fn polygon<T: Real>(n: usize, corners: &[(f64, f64)]) -> ClosedCurve<T> {
    let pts: Vec<Point<T>> = corners.iter().map(|&(x, y)| Point::new(T::lit(x), T::lit(y))).collect();
    resample_arclength(&pts, n).expect("fixture polygon is regular")
}

/// A horizontal strand and a parabola `y = a - x²` closed up by connectors.
/// For `a > 0` the strands cross twice, the horizontal strand passing over
/// both times; for `a < 0` they are disjoint. The pair `a = ±0.3` is a
/// second Reidemeister move.
pub fn bigon_diagram<T: Real>(n: usize, a: f64) -> KnotDiagram<T> {
    let mut corners = vec![(-2.0, 0.0), (2.0, 0.0), (3.0, 0.0), (3.0, -4.0)];
    let m = 64;
    corners.extend((0..=m).map(|i| {
        let x = 2.0 - 4.0 * i as f64 / m as f64;
        (x, a - x * x)
    }));
    corners.extend([(-3.0, -4.0), (-3.0, 0.0)]);
    detect_crossings(&polygon(n, &corners), &CrossingRule::FirstOver).expect("bigon fixture is generic")
}

/// Three strands on the lines `y = c`, `y = 2x + 1` and `y = 1 - 2x`, closed
/// up by connectors that add one distant crossing. Moving `c` across `1`
/// slides the horizontal strand over the crossing of the other two, a third
/// Reidemeister move.
pub fn triangle_diagram<T: Real>(n: usize, c: f64) -> KnotDiagram<T> {
    let corners = [
        (-4.0, c),
        (4.0, c),
        (5.0, c),
        (5.0, -6.0),
        (-2.0, -6.0),
        (-2.0, -3.0),
        (1.5, 4.0),
        (1.5, 6.0),
        (-1.5, 6.0),
        (-1.5, 4.0),
        (2.0, -3.0),
        (2.0, -5.0),
        (-6.0, -5.0),
        (-6.0, c),
    ];
    detect_crossings(&polygon(n, &corners), &CrossingRule::FirstOver).expect("triangle fixture is generic")
}

/// The limaçon `r = a + cos θ`: one crossing (an inner loop) for `a < 1`,
/// none for `a > 1`. Passing between the two removes a loop, a first
/// Reidemeister move.
pub fn limacon_diagram<T: Real>(n: usize, a: f64) -> KnotDiagram<T> {
    let c = sampled(n, 8 * n.max(512), |t| {
        let r = a + t.cos();
        (r * t.cos(), r * t.sin())
    });
    detect_crossings(&c, &CrossingRule::Alternating).expect("limaçon is generic")
}

/// A circle whose top arc is pushed down through the bottom arc, giving a
/// curve of Whitney index one with two crossings. With alternating crossings
/// the two arcs are clasped and cannot be separated by second or third
/// Reidemeister moves.
pub fn clasp<T: Real>(n: usize) -> ClosedCurve<T> {
    sampled(n, 8 * n.max(512), |t| {
        let s = (t - std::f64::consts::FRAC_PI_2) / 0.45;
        (t.cos(), t.sin() - 2.4 * (-s * s).exp())
    })
}
