//! The acceptance suite: thirteen numbered checks with fixed tolerances,
//! shared by the `acceptance` test target and `flatknot verify`.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;
use std::time::{Duration, Instant};

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::{
    aligned_hausdorff, closure_report, gauss_from_curve, whitney_index, ClosedCurve,
};
use crate::diagram::lattice::{binomial, grid_cycle_count};
use crate::diagram::{
    enumerate_cycles, family_cycles, lattice, resistance_energy, Family, GmreVariant, KnotDiagram,
};
use crate::error::Error;
use crate::fixtures;
use crate::flow::{relax, relax_diagram, FlowConfig, FlowTrace, Resistance, Termination};
use crate::pendulum::{build_infinity_curve, elliptic_k, find_critical_xi, jacobi_sn, pendulum_alpha, PendulumParams};
use crate::real::Point;
use crate::uniformization::{
    curve_energy, discrete_curvature, el_residual, energy_uf, energy_uf_extended, l2_norm, project_closure,
    uf_gradient, EnergyFunctional,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    Pendulum,
    Curve,
    Diagram,
    Flow,
}

impl Group {
    pub fn name(self) -> &'static str {
        match self {
            Group::Pendulum => "pendulum",
            Group::Curve => "curve",
            Group::Diagram => "diagram",
            Group::Flow => "flow",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Group::Pendulum, Group::Curve, Group::Diagram, Group::Flow].into_iter().find(|g| g.name() == s)
    }
}

/// Passed or failed, with a one-line account of the measured values.
pub type Check = std::result::Result<String, String>;

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub group: Group,
    run: fn() -> Check,
}

impl Criterion {
    pub fn run(&self) -> Outcome {
        let start = Instant::now();
        let res = (self.run)();
        let elapsed = start.elapsed();
        let (passed, detail) = match res {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        Outcome { id: self.id, name: self.name, passed, detail, elapsed }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<28} {:>8.2}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, name: "critical amplitude", group: Group::Pendulum, run: xi_root },
        Criterion { id: 2, name: "grid cycle table", group: Group::Diagram, run: grid_table },
        Criterion { id: 3, name: "trefoil census", group: Group::Diagram, run: trefoil_census },
        Criterion { id: 4, name: "energies of round curves", group: Group::Curve, run: round_energies },
        Criterion { id: 5, name: "extended energy convergence", group: Group::Curve, run: extended_convergence },
        Criterion { id: 6, name: "infinity curve is critical", group: Group::Curve, run: infinity_critical },
        Criterion { id: 7, name: "parity of r", group: Group::Pendulum, run: parity },
        Criterion { id: 8, name: "elliptic identities", group: Group::Pendulum, run: elliptic_identities },
        Criterion { id: 9, name: "gradient vs differences", group: Group::Curve, run: gradient_check },
        Criterion { id: 10, name: "cycle count bound", group: Group::Diagram, run: gamma_bound },
        Criterion { id: 11, name: "woven lattice bound", group: Group::Diagram, run: gstar_bound },
        Criterion { id: 12, name: "flow behaviour", group: Group::Flow, run: flow_behaviour },
        Criterion { id: 13, name: "scaling laws", group: Group::Curve, run: scaling },
    ]
}

/// Runs the criteria accepted by `keep`, in order.
pub fn run(keep: impl Fn(&Criterion) -> bool) -> Vec<Outcome> {
    criteria().iter().filter(|c| keep(c)).map(Criterion::run).collect()
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn lib(e: Error) -> String {
    format!("error: {e}")
}

fn xi_root() -> Check {
    let start = Instant::now();
    let x2 = find_critical_xi::<f64>(2).map_err(lib)?;
    let t = start.elapsed().as_secs_f64();
    let x4 = find_critical_xi::<f64>(4).map_err(lib)?;
    ensure!((x2 - 0.90890856).abs() <= 1e-6, "xi = {x2:.10}, expected 0.90890856");
    ensure!(t < 1.0, "root took {t:.2}s");
    ensure!((x2 - x4).abs() < 1e-9, "r = 2 gives {x2:.12}, r = 4 gives {x4:.12}");
    Ok(format!("xi = {x2:.10} in {t:.3}s, |xi(2) - xi(4)| = {:.1e}", (x2 - x4).abs()))
}

fn grid_table() -> Check {
    let expected = [1u64, 13, 213, 9349, 1222363];
    let start = Instant::now();
    let mut got = Vec::new();
    for n in 1..=5 {
        got.push(grid_cycle_count(n).map_err(lib)?);
    }
    let t = start.elapsed().as_secs_f64();
    ensure!(got == expected, "counts {got:?}, expected {expected:?}");
    ensure!(t < 60.0, "took {t:.1}s");
    Ok(format!("{got:?} in {t:.2}s"))
}

fn trefoil_census() -> Check {
    let start = Instant::now();
    let d = fixtures::trefoil_diagram::<f64>(256);
    let cycles = enumerate_cycles(&d, None, None).map_err(lib)?;
    let t = start.elapsed().as_secs_f64();
    let by = |k| cycles.iter().filter(|c| c.arc_count() == k).count();
    let split = (by(1), by(2), by(3));
    ensure!(cycles.len() == 11 && split == (6, 3, 2), "{} cycles split {split:?}", cycles.len());
    ensure!(cycles.iter().all(|c| c.alternated), "not all cycles alternated");
    ensure!(t < 1.0, "took {t:.2}s");
    Ok(format!("11 cycles, 6/3/2 by arcs, all alternated, {t:.3}s"))
}

/// `k` turns around a circle of radius `1/k`, total length `2π`.
fn multiple_circle(n: usize, k: usize) -> ClosedCurve<f64> {
    let pts = (0..n).map(|i| Point::unit(k as f64 * TAU * i as f64 / n as f64) * (1.0 / k as f64)).collect();
    ClosedCurve::new(pts).expect("circle is regular")
}

fn round_energies() -> Check {
    let sq = EnergyFunctional::square();
    let id = EnergyFunctional::identity();
    let circle = fixtures::circle::<f64>(512);
    let u = curve_energy(&circle, &sq);
    ensure!((u - TAU).abs() <= 1e-6, "U_x^2(circle) = {u:.9}");
    let curves = [
        ("circle", circle),
        ("double circle", multiple_circle(1024, 2)),
        ("infinity curve", build_infinity_curve::<f64>(2, 1024).map_err(lib)?),
    ];
    let mut worst: f64 = 0.0;
    for (name, c) in &curves {
        let w = whitney_index(c).map_err(lib)?;
        let ux = curve_energy(c, &id);
        let err = (ux - TAU * w as f64).abs();
        ensure!(err <= 1e-3, "{name}: U_x = {ux:.6}, Whitney index {w}");
        worst = worst.max(err);
    }
    Ok(format!("U_x^2(circle) - 2pi = {:.1e}, worst |U_x - 2pi w| = {worst:.1e}", u - TAU))
}

/// `∫ κ² ds` of the ellipse rescaled to length `2π`, by the trapezoid rule in
/// the angle parameter (spectrally accurate for this periodic integrand).
fn ellipse_energy(a: f64, b: f64) -> f64 {
    let m = 1 << 14;
    let (mut len, mut u) = (0.0, 0.0);
    for i in 0..m {
        let (s, c) = (TAU * i as f64 / m as f64).sin_cos();
        let speed = (a * a * s * s + b * b * c * c).sqrt();
        let k = a * b / speed.powi(3);
        len += speed;
        u += k * k * speed;
    }
    let h = TAU / m as f64;
    // scaling the curve by 2π/len scales ∫κ²ds by len/2π
    u * h * (len * h) / TAU
}

fn extended_convergence() -> Check {
    let sq = EnergyFunctional::square();
    let eps = [0.1, 0.05, 0.025];
    let n = 2048;
    // the circumradius of three points of a circle is its radius, so on the
    // circle only interpolation noise remains
    let circle = fixtures::circle::<f64>(n);
    let o = circle.centroid();
    let r = circle.points().iter().map(|p| p.dist(o)).sum::<f64>() / n as f64;
    let exact = circle.length() / (r * r);
    let mut circle_err: f64 = 0.0;
    for e in eps {
        let err = (energy_uf_extended(&circle, &sq, e).map_err(lib)? - exact).abs();
        circle_err = circle_err.max(err);
    }
    ensure!(circle_err < 1e-7, "circle error {circle_err:.2e} above the 1e-7 noise floor");

    let el = fixtures::ellipse::<f64>(n, 1.0, 0.6);
    let exact = ellipse_energy(1.0, 0.6);
    let errs: Vec<f64> = eps
        .iter()
        .map(|&e| energy_uf_extended(&el, &sq, e).map(|u| (u - exact).abs()))
        .collect::<crate::Result<_>>()
        .map_err(lib)?;
    let orders: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    ensure!(
        orders.iter().all(|p| *p >= 1.8),
        "ellipse errors {errs:?}, observed orders {orders:.3?}"
    );
    Ok(format!(
        "circle noise {circle_err:.1e}; ellipse errors {:.2e}, {:.2e}, {:.2e}, orders {:.2}, {:.2}",
        errs[0], errs[1], errs[2], orders[0], orders[1]
    ))
}

fn infinity_critical() -> Check {
    let c = build_infinity_curve::<f64>(2, 1024).map_err(lib)?;
    let g = gauss_from_curve(&c);
    let sq = EnergyFunctional::square();
    let rms = el_residual(&g, &sq).rms_residual;
    let grad = l2_norm(&uf_gradient(&g, &sq), g.step());
    ensure!(rms < 1e-3 && grad < 1e-3, "EL residual {rms:.2e}, projected gradient {grad:.2e}");
    Ok(format!("EL residual {rms:.2e}, projected gradient {grad:.2e}"))
}

fn parity() -> Check {
    let xi = find_critical_xi::<f64>(2).map_err(lib)?;
    let n = 1024;
    let even = closure_report(&pendulum_alpha(&PendulumParams::new(xi, 2).map_err(lib)?, n).map_err(lib)?);
    let odd = closure_report(&pendulum_alpha(&PendulumParams::new(xi, 1).map_err(lib)?, n).map_err(lib)?);
    ensure!(even.sin_integral.abs() < 1e-8, "r = 2: ∫sin α = {:.2e}", even.sin_integral);
    ensure!(odd.sin_integral.abs() > 1e-2, "r = 1: ∫sin α = {:.2e}", odd.sin_integral);
    Ok(format!("∫sin α = {:.1e} for r = 2, {:.3} for r = 1", even.sin_integral, odd.sin_integral))
}

fn elliptic_identities() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut pyth, mut dn_id): (f64, f64) = (0.0, 0.0);
    for _ in 0..10_000 {
        let u: f64 = rng.random_range(-50.0..50.0);
        let k: f64 = rng.random_range(-0.999..0.999);
        let v = jacobi_sn::<f64>(u, k).map_err(lib)?;
        pyth = pyth.max((v.sn * v.sn + v.cn * v.cn - 1.0).abs());
        dn_id = dn_id.max((v.dn * v.dn + k * k * v.sn * v.sn - 1.0).abs());
    }
    ensure!(pyth < 1e-12 && dn_id < 1e-12, "sn²+cn²-1 up to {pyth:.1e}, dn²+k²sn²-1 up to {dn_id:.1e}");
    let mut zero: f64 = 0.0;
    let mut period: f64 = 0.0;
    for i in 0..200 {
        let u = -10.0 + 0.1 * i as f64;
        zero = zero.max((jacobi_sn(u, 0.0).map_err(lib)?.sn - u.sin()).abs());
        for k in [0.3, 0.7, 0.95] {
            let four_k = 4.0 * elliptic_k(k).map_err(lib)?;
            let a = jacobi_sn(u, k).map_err(lib)?.sn;
            let b = jacobi_sn(u + four_k, k).map_err(lib)?.sn;
            period = period.max((a - b).abs());
        }
    }
    ensure!(zero < 1e-12, "sn(u|0) differs from sin u by {zero:.1e}");
    ensure!(period < 1e-11, "sn(u + 4K) - sn(u) up to {period:.1e}");
    let k0 = (elliptic_k(0.0).map_err(lib)? - FRAC_PI_2).abs();
    ensure!(k0 < 1e-14, "K(0) - π/2 = {k0:.1e}");
    Ok(format!("identities {:.1e}, sn(u|0) {zero:.1e}, period {period:.1e}, K(0) {k0:.1e}", pyth.max(dn_id)))
}

/// Relative difference between `uf_gradient` and projected central
/// differences of `energy_uf`.
fn gradient_error(c: &ClosedCurve<f64>, e: &EnergyFunctional<f64>, step: f64) -> crate::Result<f64> {
    let g = gauss_from_curve(c);
    let h = g.step();
    let grad = uf_gradient(&g, e);
    let mut fd = Vec::with_capacity(g.len());
    for i in 0..g.len() {
        let mut plus = g.alpha().to_vec();
        let mut minus = plus.clone();
        plus[i] += step;
        minus[i] -= step;
        let up = energy_uf(&g.with_alpha(plus)?, e);
        let um = energy_uf(&g.with_alpha(minus)?, e);
        // the L² gradient carries the quadrature weight h
        fd.push((up - um) / (2.0 * step * h));
    }
    project_closure(&g, &mut fd);
    let diff: Vec<f64> = grad.iter().zip(&fd).map(|(a, b)| a - b).collect();
    Ok(l2_norm(&diff, h) / l2_norm(&grad, h))
}

fn gradient_check() -> Check {
    let sq = EnergyFunctional::square();
    let quartic = EnergyFunctional::by_name("x^4").map_err(lib)?;
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let c = fixtures::random_curve::<f64>(256, 3, 9000 + seed);
        for (name, e, step) in [("x^2", &sq, 1e-6), ("x^4", &quartic, 1e-5)] {
            let rel = gradient_error(&c, e, step).map_err(lib)?;
            ensure!(rel < 1e-5, "seed {seed}, f = {name}: relative error {rel:.2e}");
            worst = worst.max(rel);
        }
    }
    Ok(format!("20 curves, f = x^2 and x^4, worst relative error {worst:.1e}"))
}

fn gamma_bound() -> Check {
    let mut worst = String::new();
    let mut failures = 0;
    for seed in 0..50 {
        let d = fixtures::random_diagram::<f64>(256, 1, 8, 10_000 + seed);
        let n = d.crossing_count() as f64;
        // the bound is claimed for every δ, so take the cap off
        let gamma = family_cycles(&d, Family::GMRE, f64::INFINITY, GmreVariant::default()).map_err(lib)?;
        let total_bound = n.powi(4) / 24.0 + n.powi(3) / 6.0 + n * n / 2.0 + n;
        let mut problems = Vec::new();
        if gamma.len() as f64 > total_bound {
            problems.push(format!("|Γ| = {} > {total_bound:.3}", gamma.len()));
        }
        let mut fact = 1.0;
        for p in 1..=4 {
            fact *= p as f64;
            let count = gamma.iter().filter(|c| c.arc_count() == p).count();
            let bound = n.powi(p as i32) / fact;
            if count as f64 >= bound {
                problems.push(format!("{count} {p}-arc cycles, bound {bound:.3}"));
            }
        }
        if !problems.is_empty() {
            failures += 1;
            if worst.is_empty() {
                worst = format!("seed {}, n = {n}: {}", 10_000 + seed, problems.join("; "));
            }
        }
    }
    ensure!(failures == 0, "{failures}/50 diagrams exceed the bound; first: {worst}");
    Ok("50 diagrams within the bound".into())
}

fn gstar_bound() -> Check {
    let mut parts = Vec::new();
    for n in 2..=4 {
        let count = lattice::gstar_alternated_count(n).map_err(lib)?;
        let bound = binomial(n as u64, n as u64 / 2) - 1;
        ensure!(count >= bound, "G*({n}): {count} alternated cycles, bound {bound}");
        parts.push(format!("G*({n}) {count} >= {bound}"));
    }
    Ok(parts.join(", "))
}

fn timed<F: FnOnce() -> crate::Result<FlowTrace<f64>>>(label: &str, f: F) -> std::result::Result<FlowTrace<f64>, String> {
    let start = Instant::now();
    let trace = f().map_err(|e| format!("{label}: {e}"))?;
    let t = start.elapsed().as_secs_f64();
    if t >= 120.0 {
        return Err(format!("{label}: took {t:.1}s"));
    }
    Ok(trace)
}

fn flow_behaviour() -> Check {
    let cfg = |resistance, delta, max_iters| FlowConfig { resistance, delta, max_iters, ..FlowConfig::default() };

    let trace = timed("(a)", || relax(&fixtures::noisy_circle(256, 0.05, 1), &cfg(Resistance::MRE, 0.05, 500)))?;
    let k = discrete_curvature(&gauss_from_curve(&trace.final_curve));
    let spread = k.iter().cloned().fold(f64::MIN, f64::max) - k.iter().cloned().fold(f64::MAX, f64::min);
    ensure!(spread < 1e-3, "(a) curvature spread {spread:.2e} ({:?})", trace.terminated);

    let trace = timed("(b)", || relax(&fixtures::noisy_figure_eight(256, 0.05, 1), &cfg(Resistance::None, 0.05, 500)))?;
    let target = build_infinity_curve::<f64>(2, 256).map_err(lib)?.rescaled_to_length(TAU);
    let hd = aligned_hausdorff(&trace.final_curve, &target);
    ensure!(hd < 1e-2, "(b) Hausdorff distance {hd:.2e} ({:?})", trace.terminated);

    let mut bounded = 0;
    for seed in 0..8 {
        let d: KnotDiagram<f64> = fixtures::random_diagram(256, 2, 6, 900 + seed);
        let c = cfg(Resistance::MRE, 0.3, 150);
        let trace = timed("(c)", || relax_diagram(&d, &c))?;
        if trace.max_gmre().is_some_and(|g| g <= c.gmre_ceiling) {
            bounded += 1;
            ensure!(!trace.has_forbidden_event(), "(c) seed {}: forbidden event with bounded GMRE", 900 + seed);
        }
    }

    let delta = 0.3;
    let trace = timed("(d)", || relax(&fixtures::trefoil(256), &cfg(Resistance::MRE, delta, 400)))?;
    ensure!(trace.terminated != Termination::ForbiddenEvent, "(d) forbidden event");
    let cycles = enumerate_cycles(&trace.final_diagram, None, None).map_err(lib)?;
    let small = cycles.iter().filter(|c| c.alternated && c.area < delta).map(|c| c.area).fold(f64::INFINITY, f64::min);
    ensure!(small.is_finite(), "(d) no alternated cycle of area below {delta}");
    Ok(format!(
        "spread {spread:.1e}; Hausdorff {hd:.1e}; {bounded}/8 bounded traces clean; smallest alternated area {small:.3} < {delta}"
    ))
}

fn scaling() -> Check {
    let d = fixtures::trefoil_diagram::<f64>(256);
    let s = 1.7;
    let scaled = d.transformed(s, 0.3, Point::new(0.5, -2.0)).map_err(lib)?;
    let re = resistance_energy(&d).map_err(lib)?.total;
    let re_s = resistance_energy(&scaled).map_err(lib)?.total;
    let re_err = (re_s - re / (s * s)).abs() / re;
    ensure!(re_err < 1e-9, "RE relative error {re_err:.1e}");
    let sq = EnergyFunctional::square();
    let c = fixtures::trefoil::<f64>(256);
    let u = curve_energy(&c, &sq);
    let u_s = curve_energy(&c.scaled(s), &sq);
    let u_err = (u_s - u / s).abs() / u;
    ensure!(u_err < 1e-6, "U relative error {u_err:.1e}");
    Ok(format!("RE {re_err:.1e}, U {u_err:.1e} at s = {s}"))
}
