//! Gradient flow of `E = U_f + R` on closed curves of length `2π`.
//!
//! The state is the tangent-angle sequence `α` on a fixed grid of step
//! `2π/N`, so the Whitney index cannot change. A step moves `α` against the
//! projected gradient, preconditioned by `(1 + μ D*D)⁻¹` with `D` the
//! central difference that defines the curvature, restores the closure
//! conditions by Newton iteration, rebuilds the curve and rescales it to
//! length `2π`. The resistance part of the gradient is a central
//! difference in `α` with the combinatorics of the diagram held fixed.
//!
//! Crossing types are carried from one iterate to the next by matching
//! crossing positions. Whenever a trial step changes the crossings, the step
//! is shrunk by bisection until the change is localized, and the change is
//! classified as a Reidemeister move. A change that is not a second or third
//! move stops the flow.

mod events;

pub use events::{carry_types, classify_event, classify_event_within, matching_radius, EventKind, FlowEvent};

use rayon::prelude::*;

use crate::curve::{curve_from_gauss, gauss_from_curve, whitney_index, ClosedCurve, GaussRep};
use crate::diagram::{
    detect_crossings, family_cycles, gmre, mre, resistance_energy, segment_intersection, CrossingRule,
    DiagramCycle, Family, GmreVariant, KnotDiagram, TracePoint,
};
use crate::error::{Error, Result};
use crate::real::{signed_area, Point, Real};
use crate::uniformization::{energy_uf, inner, l2_norm, project_closure, uf_gradient_raw, EnergyFunctional};

/// Resistance term of the flow energy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Resistance {
    None,
    RE,
    MRE,
    GMRE,
}

#[derive(Clone, Debug)]
pub struct FlowConfig<T> {
    pub functional: EnergyFunctional<T>,
    pub resistance: Resistance,
    pub delta: T,
    /// Initial and largest trial step. Steps are capped because modes that
    /// the central-difference curvature barely sees would otherwise grow
    /// under long steps without raising the energy.
    pub step0: T,
    pub max_iters: usize,
    /// Stop once the projected gradient norm falls below this.
    pub grad_tol: T,
    /// Bound on `GMRE` under which no forbidden event may occur.
    pub gmre_ceiling: T,
    /// Central-difference step in `α` for the resistance gradient.
    pub fd_step: T,
    /// Smoothing length `μ` of the preconditioner; zero gives the
    /// band-limited `L²` gradient.
    pub smoothing: T,
}

impl<T: Real> Default for FlowConfig<T> {
    fn default() -> Self {
        Self {
            functional: EnergyFunctional::square(),
            resistance: Resistance::MRE,
            delta: T::lit(0.05),
            step0: T::lit(0.5),
            max_iters: 2000,
            grad_tol: T::lit(1e-6),
            gmre_ceiling: T::lit(1e6),
            fd_step: T::lit(1e-6),
            smoothing: T::one(),
        }
    }
}

impl<T: Real> FlowConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.step0 > T::zero()) || !(self.grad_tol > T::zero()) || !(self.delta > T::zero()) {
            return Err(Error::Invalid("step0, grad_tol and delta must be positive".into()));
        }
        if !(self.fd_step > T::zero()) || self.smoothing < T::zero() {
            return Err(Error::Invalid("fd_step must be positive and smoothing non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxIters,
    ForbiddenEvent,
    Singular,
    Stalled,
}

/// Energies of one iterate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyRecord<T> {
    pub iter: usize,
    pub u: T,
    pub r: T,
    pub total: T,
    /// `GMRE_δ` of the iterate; absent if it could not be evaluated.
    pub gmre: Option<T>,
    pub crossings: usize,
    /// Norm of the projected gradient restricted to the modes the flow uses.
    pub grad_norm: T,
    pub whitney: Option<i64>,
}

#[derive(Clone, Debug)]
pub struct FlowTrace<T> {
    pub energies: Vec<EnergyRecord<T>>,
    pub events: Vec<FlowEvent<T>>,
    pub final_curve: ClosedCurve<T>,
    pub final_diagram: KnotDiagram<T>,
    pub terminated: Termination,
}

impl<T: Real> FlowTrace<T> {
    /// Largest recorded `GMRE`, if every iterate had one.
    pub fn max_gmre(&self) -> Option<T> {
        self.energies.iter().map(|e| e.gmre).try_fold(T::zero(), |m, g| g.map(|g| m.max(g)))
    }

    pub fn has_forbidden_event(&self) -> bool {
        self.events.iter().any(|e| e.kind == EventKind::Forbidden)
    }
}

/// Resistance of a diagram under the configured family.
pub fn resistance<T: Real>(d: &KnotDiagram<T>, kind: Resistance, delta: T) -> Result<T> {
    Ok(match kind {
        Resistance::None => T::zero(),
        Resistance::RE => resistance_energy(d)?.total,
        Resistance::MRE => mre(d, delta)?.total,
        Resistance::GMRE => gmre(d, delta)?.total,
    })
}

/// `(U, R)` of a curve whose crossings alternate.
pub fn total_energy<T: Real>(c: &ClosedCurve<T>, cfg: &FlowConfig<T>) -> Result<(T, T)> {
    let d = detect_crossings(c, &CrossingRule::Alternating)?;
    total_energy_of(&d, cfg)
}

/// `(U, R)` of a diagram.
pub fn total_energy_of<T: Real>(d: &KnotDiagram<T>, cfg: &FlowConfig<T>) -> Result<(T, T)> {
    let u = energy_uf(&gauss_from_curve(d.curve()), &cfg.functional);
    let r = resistance(d, cfg.resistance, cfg.delta)?;
    Ok((u, r))
}

/// Newton correction of `α` along `sin α`, `cos α` until `Σ cos α = Σ sin α = 0`.
fn close_alpha<T: Real>(alpha: &mut [T]) {
    let n = T::from_usize_lossy(alpha.len());
    for _ in 0..30 {
        let (mut fc, mut fs, mut ss, mut sc, mut cc) = (T::zero(), T::zero(), T::zero(), T::zero(), T::zero());
        for a in alpha.iter() {
            let (s, c) = a.sin_cos();
            fc += c;
            fs += s;
            ss += s * s;
            sc += s * c;
            cc += c * c;
        }
        if fc.abs().max(fs.abs()) < T::tol(1e-14) * n {
            return;
        }
        // J = [[-ss, -sc], [sc, cc]] for α += λ₁ sin α + λ₂ cos α
        let det = -ss * cc + sc * sc;
        if det.abs() < T::tol(1e-300) {
            return;
        }
        let l1 = (-fc * cc - sc * fs) / det;
        let l2 = (ss * fs + sc * fc) / det;
        for a in alpha.iter_mut() {
            let (s, c) = a.sin_cos();
            *a += l1 * s + l2 * c;
        }
    }
}

/// Real periodic smoothing `x̂_k ↦ x̂_k / (1 + μ σ_k²)` by direct DFT, where
/// `σ_k = sin(kh)/h` is the symbol of the central difference on step `h = 2π/N`.
/// Modes above `N/4` are dropped: there `σ_k` falls back towards zero, and
/// the even and odd samples decouple into two chains the energy cannot tell
/// apart from a smooth curve.
struct Smoother<T> {
    cos: Vec<T>,
    sin: Vec<T>,
    mu: T,
}

impl<T: Real> Smoother<T> {
    fn new(n: usize, mu: T) -> Self {
        let (sin, cos) = (0..n)
            .map(|k| (T::two_pi() * T::from_usize_lossy(k) / T::from_usize_lossy(n)).sin_cos())
            .unzip();
        Self { cos, sin, mu }
    }

    fn apply(&self, x: &[T]) -> Vec<T> {
        let scale = T::from_usize_lossy(x.len()) / T::two_pi();
        self.filter(x, |k| {
            let sigma = self.sin[k] * scale;
            T::one() / (T::one() + self.mu * sigma * sigma)
        })
    }

    /// Keeps modes up to `N/4` unchanged.
    fn low_pass(&self, x: &[T]) -> Vec<T> {
        self.filter(x, |_| T::one())
    }

    fn filter(&self, x: &[T], weight: impl Fn(usize) -> T) -> Vec<T> {
        let n = x.len();
        let nt = T::from_usize_lossy(n);
        let mut out = vec![T::zero(); n];
        for k in 0..=n / 4 {
            let (mut re, mut im) = (T::zero(), T::zero());
            for (j, xj) in x.iter().enumerate() {
                let m = (k * j) % n;
                re += *xj * self.cos[m];
                im += *xj * self.sin[m];
            }
            let mult = if k == 0 || 2 * k == n { T::one() } else { T::lit(2.0) };
            let c = weight(k) * mult / nt;
            let (re, im) = (re * c, im * c);
            for (j, o) in out.iter_mut().enumerate() {
                let m = (k * j) % n;
                *o += re * self.cos[m] + im * self.sin[m];
            }
        }
        out
    }
}

/// Curve of an angle sequence: trapezoid reconstruction, rescaled to length
/// `2π` and centred at `center`.
fn points_of<T: Real>(alpha: &[T], step: T, center: Point<T>) -> Result<ClosedCurve<T>> {
    let g = GaussRep::with_step(alpha.to_vec(), Point::zero(), step)?;
    let c = curve_from_gauss(&g).rescaled_to_length(T::two_pi());
    let shift = center - c.centroid();
    Ok(c.translated(shift))
}

/// Resistance with the diagram's combinatorics frozen: crossing points are
/// recomputed from their segment pairs and the given cycles re-measured.
struct FrozenResistance<'a, T> {
    diagram: &'a KnotDiagram<T>,
    cycles: Vec<DiagramCycle<T>>,
    kind: Resistance,
    delta: T,
    free_loop: bool,
}

impl<'a, T: Real> FrozenResistance<'a, T> {
    fn new(diagram: &'a KnotDiagram<T>, kind: Resistance, delta: T) -> Result<Self> {
        let (family, cap) = match kind {
            Resistance::None => {
                return Ok(Self { diagram, cycles: vec![], kind, delta, free_loop: false });
            }
            Resistance::RE => (Family::RE, delta),
            Resistance::MRE => (Family::MRE, delta * T::lit(1.5)),
            Resistance::GMRE => (Family::GMRE, delta * T::lit(1.5)),
        };
        let cycles = family_cycles(diagram, family, cap, GmreVariant::default())?;
        let free_loop = diagram.graph().free_loop.is_some();
        Ok(Self { diagram, cycles, kind, delta, free_loop })
    }

    fn eval(&self, pts: &[Point<T>]) -> T {
        if self.cycles.is_empty() {
            return T::zero();
        }
        let summand = |a: T| match self.kind {
            Resistance::RE => T::one() / a,
            _ => (T::one() / a - T::one() / self.delta).max(T::zero()),
        };
        if self.free_loop {
            return summand(signed_area(pts).abs());
        }
        let g = self.diagram.graph();
        let vertex: Vec<Point<T>> = self
            .diagram
            .crossings()
            .iter()
            .map(|c| {
                segment_intersection(pts, c.over_passage.segment, c.under_passage.segment)
                    .map_or(c.position, |(_, _, p)| p)
            })
            .collect();
        let at = |t: &TracePoint| match *t {
            TracePoint::Sample(i) => pts[i],
            TracePoint::Vertex(v) => vertex[v],
        };
        let mut total = T::zero();
        let mut poly: Vec<Point<T>> = Vec::new();
        for cy in &self.cycles {
            poly.clear();
            for v in &cy.visits {
                let s = g.vertices[v.vertex].slot(v.out_slot);
                let tr = &g.edges[s.edge].trace;
                if s.at_start {
                    poly.extend(tr[..tr.len() - 1].iter().map(at));
                } else {
                    poly.extend(tr[1..].iter().rev().map(at));
                }
            }
            total += summand(signed_area(&poly).abs());
        }
        total
    }
}

/// One iterate of the flow.
#[derive(Clone, Debug)]
struct State<T> {
    alpha: Vec<T>,
    curve: ClosedCurve<T>,
    diagram: KnotDiagram<T>,
    u: T,
    r: T,
}

impl<T: Real> State<T> {
    fn energy(&self) -> T {
        self.u + self.r
    }
}

enum Trial<T> {
    Same(State<T>),
    Changed(State<T>),
    Invalid,
}

struct Flow<'a, T> {
    cfg: &'a FlowConfig<T>,
    step: T,
    center: Point<T>,
    smoother: Smoother<T>,
}

impl<T: Real> Flow<'_, T> {
    fn evaluate(&self, alpha: Vec<T>, curve: ClosedCurve<T>, diagram: KnotDiagram<T>) -> Result<State<T>> {
        let g = GaussRep::with_step(alpha.clone(), Point::zero(), self.step)?;
        let u = energy_uf(&g, &self.cfg.functional);
        let r = resistance(&diagram, self.cfg.resistance, self.cfg.delta)?;
        Ok(State { alpha, curve, diagram, u, r })
    }

    /// Projected gradient and preconditioned descent direction.
    fn direction(&self, s: &State<T>) -> Result<(Vec<T>, Vec<T>)> {
        let n = s.alpha.len();
        let g = GaussRep::with_step(s.alpha.clone(), Point::zero(), self.step)?;
        let mut grad = uf_gradient_raw(&g, &self.cfg.functional);
        if self.cfg.resistance != Resistance::None {
            let frozen = FrozenResistance::new(&s.diagram, self.cfg.resistance, self.cfg.delta)?;
            if !frozen.cycles.is_empty() {
                let eps = self.cfg.fd_step;
                let scale = T::one() / (eps + eps) / self.step;
                let parts: Vec<T> = (0..n)
                    .into_par_iter()
                    .map(|i| {
                        let mut a = s.alpha.clone();
                        a[i] += eps;
                        let plus = points_of(&a, self.step, self.center).map(|c| frozen.eval(c.points()));
                        a[i] = s.alpha[i] - eps;
                        let minus = points_of(&a, self.step, self.center).map(|c| frozen.eval(c.points()));
                        match (plus, minus) {
                            (Ok(p), Ok(m)) => (p - m) * scale,
                            _ => T::zero(),
                        }
                    })
                    .collect();
                for (g, p) in grad.iter_mut().zip(parts) {
                    *g += p;
                }
            }
        }
        project_closure(&g, &mut grad);
        let mut dir = self.smoother.apply(&grad);
        project_closure(&g, &mut dir);
        Ok((grad, dir))
    }

    fn trial(&self, s: &State<T>, dir: &[T], tau: T) -> Result<Trial<T>> {
        let mut alpha: Vec<T> = s.alpha.iter().zip(dir).map(|(a, d)| *a - tau * *d).collect();
        close_alpha(&mut alpha);
        let curve = match points_of(&alpha, self.step, self.center) {
            Ok(c) => c,
            Err(Error::NotRegular(_)) => return Ok(Trial::Invalid),
            Err(e) => return Err(e),
        };
        let radius = matching_radius(&s.curve, &curve);
        let (diagram, changed) = match carry_types(&s.diagram, curve.clone(), radius) {
            Ok(x) => x,
            Err(Error::CodimensionOne { .. }) => return Ok(Trial::Changed(self.invalid_state(s))),
            Err(e) => return Err(e),
        };
        let state = match self.evaluate(alpha, curve, diagram) {
            Ok(st) => st,
            Err(Error::SingularDiagram(_)) | Err(Error::NotRegular(_)) => return Ok(Trial::Invalid),
            Err(e) => return Err(e),
        };
        Ok(if changed { Trial::Changed(state) } else { Trial::Same(state) })
    }

    /// Placeholder for a trial that landed exactly on a codimension-one
    /// configuration; it carries infinite energy so it is never accepted.
    fn invalid_state(&self, s: &State<T>) -> State<T> {
        State { u: T::infinity(), r: T::infinity(), ..s.clone() }
    }
}

/// Result of one accepted step.
struct Step<T> {
    state: State<T>,
    tau: T,
    event: Option<FlowEvent<T>>,
}

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-12;
const BISECTIONS: usize = 30;

impl<T: Real> Flow<'_, T> {
    fn armijo(&self, s: &State<T>, t: &State<T>, tau: T, slope: T) -> bool {
        t.energy().is_finite() && t.energy() <= s.energy() - T::lit(ARMIJO) * tau * slope
    }

    /// Backtracking line search along `-dir` starting at `tau`.
    fn line_search(&self, s: &State<T>, grad: &[T], dir: &[T], mut tau: T) -> Result<Step<T>> {
        let slope = inner(grad, dir, self.step);
        loop {
            if tau < T::lit(MIN_STEP) {
                return Err(Error::Stalled(tau.to_f64_lossy()));
            }
            match self.trial(s, dir, tau)? {
                Trial::Invalid => tau = tau * T::lit(0.5),
                Trial::Same(t) => {
                    if self.armijo(s, &t, tau, slope) {
                        return Ok(Step { state: t, tau, event: None });
                    }
                    tau = tau * T::lit(0.5);
                }
                Trial::Changed(_) => {
                    // localize the change
                    let (mut lo, mut hi) = (T::zero(), tau);
                    let mut lo_state: Option<State<T>> = None;
                    let mut hi_state: Option<State<T>> = None;
                    for _ in 0..BISECTIONS {
                        let mid = (lo + hi) * T::lit(0.5);
                        match self.trial(s, dir, mid)? {
                            Trial::Same(t) => {
                                lo = mid;
                                lo_state = Some(t);
                            }
                            Trial::Changed(t) => {
                                hi = mid;
                                hi_state = Some(t);
                            }
                            Trial::Invalid => hi = mid,
                        }
                    }
                    let hi_state = match hi_state {
                        Some(t) => Some(t),
                        None => match self.trial(s, dir, hi)? {
                            Trial::Changed(t) => Some(t),
                            _ => None,
                        },
                    };
                    // the path up to the change must descend as well, so the
                    // step cannot jump over a barrier of a shrinking cycle
                    let path_ok = lo_state.as_ref().is_none_or(|l| self.armijo(s, l, lo, slope));
                    if let Some(t) = hi_state.filter(|_| path_ok) {
                        if self.armijo(s, &t, hi, slope) {
                            let before = lo_state.as_ref().map_or(&s.diagram, |l| &l.diagram);
                            let radius = matching_radius(before.curve(), t.diagram.curve());
                            let event = classify_event_within(before, &t.diagram, radius);
                            // move on to the full step when nothing else
                            // changes, so the next step does not start on the
                            // event boundary
                            if hi < tau {
                                if let Trial::Same(full) = self.trial(&t, dir, tau - hi)? {
                                    if self.armijo(s, &full, tau, slope) {
                                        return Ok(Step { state: full, tau, event });
                                    }
                                }
                            }
                            return Ok(Step { state: t, tau: hi, event });
                        }
                    }
                    if let Some(l) = lo_state {
                        if lo > T::zero() && self.armijo(s, &l, lo, slope) {
                            return Ok(Step { state: l, tau: lo, event: None });
                        }
                    }
                    tau = lo * T::lit(0.5);
                }
            }
        }
    }

    /// `L²` norm of the part of `grad` the flow can move along.
    fn band_norm(&self, grad: &[T]) -> T {
        l2_norm(&self.smoother.low_pass(grad), self.step)
    }

    fn record(&self, iter: usize, s: &State<T>, grad_norm: T) -> EnergyRecord<T> {
        EnergyRecord {
            iter,
            u: s.u,
            r: s.r,
            total: s.u + s.r,
            gmre: gmre(&s.diagram, self.cfg.delta).ok().map(|b| b.total),
            crossings: s.diagram.crossing_count(),
            grad_norm,
            whitney: whitney_index(&s.curve).ok(),
        }
    }
}

/// Initial state: the angle sequence of `d0`'s curve, closed, with crossing
/// types carried over from `d0`.
fn initial<'a, T: Real>(d0: &KnotDiagram<T>, cfg: &'a FlowConfig<T>) -> Result<(Flow<'a, T>, State<T>)> {
    cfg.validate()?;
    let c0 = d0.curve().rescaled_to_length(T::two_pi());
    let n = c0.len();
    let g0 = gauss_from_curve(&c0);
    let smoother = Smoother::new(n, cfg.smoothing);
    // band-limit the periodic part of the lift
    let turn = g0.lift_defect() / T::from_usize_lossy(n);
    let periodic: Vec<T> = g0.alpha().iter().enumerate().map(|(i, a)| *a - turn * T::from_usize_lossy(i)).collect();
    let mut alpha: Vec<T> = smoother
        .low_pass(&periodic)
        .into_iter()
        .enumerate()
        .map(|(i, a)| a + turn * T::from_usize_lossy(i))
        .collect();
    close_alpha(&mut alpha);
    let step = T::two_pi() / T::from_usize_lossy(n);
    let flow = Flow { cfg, step, center: c0.centroid(), smoother };
    let curve = points_of(&alpha, step, flow.center)?;
    let d0 = d0.transformed(c0.length() / d0.curve().length(), T::zero(), Point::zero())?;
    let d0 = d0.transformed(T::one(), T::zero(), flow.center - d0.curve().centroid())?;
    let radius = matching_radius(d0.curve(), &curve).max(T::lit(4.0) * step);
    let (diagram, _) = carry_types(&d0, curve.clone(), radius)?;
    let state = flow.evaluate(alpha, curve, diagram)?;
    Ok((flow, state))
}

/// One step of the flow from `c` with initial trial step `step`; crossings
/// are taken as alternating. Returns the new curve and the accepted step.
pub fn flow_step<T: Real>(c: &ClosedCurve<T>, cfg: &FlowConfig<T>, step: T) -> Result<(ClosedCurve<T>, T)> {
    let d = detect_crossings(c, &CrossingRule::Alternating)?;
    let (flow, state) = initial(&d, cfg)?;
    let (grad, dir) = flow.direction(&state)?;
    let st = flow.line_search(&state, &grad, &dir, step)?;
    Ok((st.state.curve, st.tau))
}

/// Projected `L²` gradient norm of `U_f + R` at a diagram, over the modes
/// the flow moves along.
pub fn projected_gradient_norm<T: Real>(d: &KnotDiagram<T>, cfg: &FlowConfig<T>) -> Result<T> {
    let (flow, state) = initial(d, cfg)?;
    let (grad, _) = flow.direction(&state)?;
    Ok(flow.band_norm(&grad))
}

/// Relaxes a curve whose crossings alternate.
pub fn relax<T: Real>(c0: &ClosedCurve<T>, cfg: &FlowConfig<T>) -> Result<FlowTrace<T>> {
    relax_diagram(&detect_crossings(c0, &CrossingRule::Alternating)?, cfg)
}

/// Runs the flow from a diagram until convergence or termination.
pub fn relax_diagram<T: Real>(d0: &KnotDiagram<T>, cfg: &FlowConfig<T>) -> Result<FlowTrace<T>> {
    relax_with(d0, cfg, |_| {})
}

/// As [`relax_diagram`], calling `observe` with every record as it is made.
pub fn relax_with<T: Real>(
    d0: &KnotDiagram<T>,
    cfg: &FlowConfig<T>,
    mut observe: impl FnMut(&TraceItem<'_, T>),
) -> Result<FlowTrace<T>> {
    let (flow, mut state) = match initial(d0, cfg) {
        Ok(x) => x,
        Err(Error::SingularDiagram(_)) => {
            return Ok(FlowTrace {
                energies: vec![],
                events: vec![],
                final_curve: d0.curve().clone(),
                final_diagram: d0.clone(),
                terminated: Termination::Singular,
            })
        }
        Err(e) => return Err(e),
    };
    let mut energies = Vec::new();
    let mut events = Vec::new();
    let mut tau = cfg.step0;
    let mut terminated = Termination::MaxIters;
    for iter in 0..=cfg.max_iters {
        let (grad, dir) = match flow.direction(&state) {
            Ok(x) => x,
            Err(Error::SingularDiagram(_)) => {
                terminated = Termination::Singular;
                break;
            }
            Err(e) => return Err(e),
        };
        let grad_norm = flow.band_norm(&grad);
        let rec = flow.record(iter, &state, grad_norm);
        observe(&TraceItem::Record(&rec, &state.diagram));
        energies.push(rec);
        if grad_norm < cfg.grad_tol {
            terminated = Termination::Converged;
            break;
        }
        if iter == cfg.max_iters {
            break;
        }
        match flow.line_search(&state, &grad, &dir, tau) {
            Ok(step) => {
                tau = (step.tau * T::lit(2.0)).min(cfg.step0);
                state = step.state;
                if let Some(mut ev) = step.event {
                    ev.iter = iter + 1;
                    observe(&TraceItem::Event(&ev));
                    events.push(ev);
                    if ev.kind == EventKind::Forbidden {
                        terminated = Termination::ForbiddenEvent;
                        break;
                    }
                }
            }
            Err(Error::Stalled(_)) => {
                terminated = Termination::Stalled;
                break;
            }
            Err(Error::SingularDiagram(_)) => {
                terminated = Termination::Singular;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(FlowTrace {
        energies,
        events,
        final_curve: state.curve.clone(),
        final_diagram: state.diagram,
        terminated,
    })
}

/// Item passed to the observer of [`relax_with`].
pub enum TraceItem<'a, T> {
    /// An iterate and the diagram it was measured on.
    Record(&'a EnergyRecord<T>, &'a KnotDiagram<T>),
    Event(&'a FlowEvent<T>),
}
