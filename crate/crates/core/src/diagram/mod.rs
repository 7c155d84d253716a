//! Knot diagrams: closed curves with over/under data at their transversal
//! double points, the cycles embedded in them, and the resistance energies
//! built from the areas of alternated cycles.

mod cycles;
mod energy;
mod graph;
mod intersect;
pub mod lattice;

pub use cycles::{enumerate_cycles, enumerate_cycles_with, Arc, CycleOptions, CycleVisit, DiagramCycle, Mode, DEFAULT_CYCLE_LIMIT};
pub use energy::{
    cycle_area, family_cycles, gmre, gmre_with, low_area_domains, mre, resistance_energy, CycleContribution, EnergyBreakdown,
    Family, GmreVariant,
};
pub use graph::{DiagramGraph, Edge, Face, Level, Slot, TracePoint, Vertex};
pub use intersect::{find_intersections, segment_intersection, Passage, RawCrossing, CODIM_TOL};

use crate::curve::ClosedCurve;
use crate::error::{Error, Result};
use crate::real::{Point, Real};

/// A double point with its crossing type.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing<T> {
    pub position: Point<T>,
    pub over_passage: Passage<T>,
    pub under_passage: Passage<T>,
    /// Rank of the over passage among all passages in traversal order.
    pub over_index: usize,
    /// Rank of the under passage among all passages in traversal order.
    pub under_index: usize,
    pub transversality_angle: T,
}

/// User-supplied crossing type, matched to a detected crossing by position.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossingSpec<T> {
    pub position: Point<T>,
    /// Curve segment carrying the over strand.
    pub over_segment: usize,
    /// Curve segment carrying the under strand.
    pub under_segment: usize,
}

/// How crossing types are assigned to detected double points.
#[derive(Clone, Debug, PartialEq)]
pub enum CrossingRule<T> {
    /// Over and under alternate along the curve.
    Alternating,
    /// The first passage along the curve is over (a descending diagram).
    FirstOver,
    /// For the `i`-th crossing in order of first passage, whether that first
    /// passage is over.
    PerCrossing(Vec<bool>),
    /// Explicit types matched by position.
    Explicit(Vec<CrossingSpec<T>>),
}

/// A closed curve together with its crossings and the planar map they induce.
#[derive(Clone, Debug, PartialEq)]
pub struct KnotDiagram<T> {
    curve: ClosedCurve<T>,
    crossings: Vec<Crossing<T>>,
    graph: DiagramGraph<T>,
}

impl<T> AsRef<DiagramGraph<T>> for KnotDiagram<T> {
    fn as_ref(&self) -> &DiagramGraph<T> {
        &self.graph
    }
}

impl<T> AsRef<DiagramGraph<T>> for DiagramGraph<T> {
    fn as_ref(&self) -> &DiagramGraph<T> {
        self
    }
}

/// Finds the crossings of `c` and assigns their types by `rule`.
pub fn detect_crossings<T: Real>(c: &ClosedCurve<T>, rule: &CrossingRule<T>) -> Result<KnotDiagram<T>> {
    let raw = find_intersections(c)?;
    let first_over = assign_types(c, &raw, rule)?;
    Ok(KnotDiagram::assemble(c.clone(), &raw, &first_over))
}

fn passage_order<T: Real>(raw: &[RawCrossing<T>]) -> Vec<(usize, bool)> {
    let mut order: Vec<(T, usize, bool)> = raw
        .iter()
        .enumerate()
        .flat_map(|(i, c)| [(c.a.param(), i, true), (c.b.param(), i, false)])
        .collect();
    order.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    order.into_iter().map(|(_, i, a)| (i, a)).collect()
}

fn assign_types<T: Real>(c: &ClosedCurve<T>, raw: &[RawCrossing<T>], rule: &CrossingRule<T>) -> Result<Vec<bool>> {
    match rule {
        CrossingRule::FirstOver => Ok(vec![true; raw.len()]),
        CrossingRule::PerCrossing(flags) => {
            if flags.len() != raw.len() {
                return Err(Error::CrossingMismatch(format!(
                    "{} crossing types for {} crossings",
                    flags.len(),
                    raw.len()
                )));
            }
            Ok(flags.clone())
        }
        CrossingRule::Alternating => {
            let mut rank = vec![[0usize; 2]; raw.len()];
            for (k, (i, a)) in passage_order(raw).into_iter().enumerate() {
                rank[i][if a { 0 } else { 1 }] = k;
            }
            rank.iter()
                .map(|r| {
                    if r[0] % 2 == r[1] % 2 {
                        Err(Error::CrossingMismatch("passages of one crossing share parity".into()))
                    } else {
                        Ok(r[0] % 2 == 0)
                    }
                })
                .collect()
        }
        CrossingRule::Explicit(specs) => {
            if specs.len() != raw.len() {
                return Err(Error::CrossingMismatch(format!(
                    "{} crossing specs for {} detected crossings",
                    specs.len(),
                    raw.len()
                )));
            }
            let n = c.len();
            let scale = c.length() / T::from_usize_lossy(n);
            let circ = |a: usize, b: usize| {
                let d = if a > b { a - b } else { b - a };
                d.min(n - d)
            };
            raw.iter()
                .map(|x| {
                    let spec = specs
                        .iter()
                        .min_by(|p, q| {
                            p.position.dist(x.position).partial_cmp(&q.position.dist(x.position)).unwrap()
                        })
                        .unwrap();
                    if spec.position.dist(x.position) > scale {
                        return Err(Error::CrossingMismatch(format!(
                            "no crossing spec near ({}, {})",
                            x.position.x, x.position.y
                        )));
                    }
                    Ok(circ(x.a.segment, spec.over_segment) <= circ(x.b.segment, spec.over_segment))
                })
                .collect()
        }
    }
}

impl<T: Real> KnotDiagram<T> {
    /// Builds the diagram from detected crossings; `first_over[i]` tells
    /// whether the first passage of crossing `i` is the over strand.
    pub fn assemble(curve: ClosedCurve<T>, raw: &[RawCrossing<T>], first_over: &[bool]) -> Self {
        let n = curve.len();
        let pts = curve.points();
        if raw.is_empty() {
            let graph = DiagramGraph { vertices: vec![], edges: vec![], free_loop: Some(pts.to_vec()) };
            return Self { curve, crossings: vec![], graph };
        }
        let order = passage_order(raw);
        let m = order.len();
        let mut rank = vec![[0usize; 2]; raw.len()];
        for (k, &(i, a)) in order.iter().enumerate() {
            rank[i][if a { 0 } else { 1 }] = k;
        }
        let passage = |i: usize, a: bool| if a { raw[i].a } else { raw[i].b };

        let mut edges = Vec::with_capacity(m);
        for k in 0..m {
            let (ci, ca) = order[k];
            let (di, da) = order[(k + 1) % m];
            let s0 = passage(ci, ca).param();
            let mut s1 = passage(di, da).param();
            if k + 1 == m {
                s1 += T::from_usize_lossy(n);
            }
            let mut polyline = vec![raw[ci].position];
            let mut trace = vec![TracePoint::Vertex(ci)];
            let first = s0.floor().to_usize().unwrap() + 1;
            let last = s1.ceil().to_usize().unwrap();
            for j in first..last {
                polyline.push(pts[j % n]);
                trace.push(TracePoint::Sample(j % n));
            }
            polyline.push(raw[di].position);
            trace.push(TracePoint::Vertex(di));
            edges.push(Edge { start: (ci, usize::MAX), end: (di, usize::MAX), polyline, trace });
        }

        let mut vertices = Vec::with_capacity(raw.len());
        let mut crossings = Vec::with_capacity(raw.len());
        for (i, x) in raw.iter().enumerate() {
            let mut half: Vec<(T, Slot)> = Vec::with_capacity(4);
            for (strand, a) in [(0u8, true), (1u8, false)] {
                let p = passage(i, a);
                let dir = pts[(p.segment + 1) % n] - pts[p.segment];
                let level = if a == first_over[i] { Level::Over } else { Level::Under };
                let r = rank[i][strand as usize];
                half.push((dir.angle(), Slot { edge: r, at_start: true, strand, level }));
                half.push(((-dir).angle(), Slot { edge: (r + m - 1) % m, at_start: false, strand, level }));
            }
            half.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
            let mut slots = [None; 4];
            for (k, (_, s)) in half.into_iter().enumerate() {
                slots[k] = Some(s);
                let e = &mut edges[s.edge];
                if s.at_start {
                    e.start = (i, k);
                } else {
                    e.end = (i, k);
                }
            }
            vertices.push(Vertex { position: x.position, slots });
            let (over, under) = if first_over[i] { (true, false) } else { (false, true) };
            crossings.push(Crossing {
                position: x.position,
                over_passage: passage(i, over),
                under_passage: passage(i, under),
                over_index: rank[i][if over { 0 } else { 1 }],
                under_index: rank[i][if under { 0 } else { 1 }],
                transversality_angle: x.angle,
            });
        }
        let graph = DiagramGraph { vertices, edges, free_loop: None };
        Self { curve, crossings, graph }
    }

    pub fn curve(&self) -> &ClosedCurve<T> {
        &self.curve
    }

    pub fn crossings(&self) -> &[Crossing<T>] {
        &self.crossings
    }

    pub fn graph(&self) -> &DiagramGraph<T> {
        &self.graph
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// For each crossing, whether its first passage is over; feeds
    /// [`CrossingRule::PerCrossing`].
    pub fn first_over_flags(&self) -> Vec<bool> {
        self.crossings
            .iter()
            .map(|c| c.over_passage.param() < c.under_passage.param())
            .collect()
    }

    /// The same diagram after a similarity `p ↦ s·R(θ)·p + v`.
    pub fn transformed(&self, s: T, theta: T, v: Point<T>) -> Result<Self> {
        let c = self.curve.map_points(|p| p.rotate(theta) * s + v);
        let flags = if s < T::zero() { self.first_over_flags() } else { self.first_over_flags() };
        detect_crossings(&c, &CrossingRule::PerCrossing(flags))
    }

    /// Crossing specs suitable for serialization.
    pub fn crossing_specs(&self) -> Vec<CrossingSpec<T>> {
        self.crossings
            .iter()
            .map(|c| CrossingSpec {
                position: c.position,
                over_segment: c.over_passage.segment,
                under_segment: c.under_passage.segment,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn trefoil_alternates() {
        let d = detect_crossings(&fixtures::trefoil::<f64>(256), &CrossingRule::Alternating).unwrap();
        assert_eq!(d.crossing_count(), 3);
        for c in d.crossings() {
            assert!(c.transversality_angle > 1e-3);
            assert_ne!(c.over_index % 2, c.under_index % 2);
        }
        // every edge runs from an over passage to an under passage
        for e in &d.graph().edges {
            let a = d.graph().vertices[e.start.0].slot(e.start.1).level;
            let b = d.graph().vertices[e.end.0].slot(e.end.1).level;
            assert_ne!(a, b);
        }
    }

    #[test]
    fn slots_alternate_strands() {
        let d = detect_crossings(&fixtures::trefoil::<f64>(256), &CrossingRule::FirstOver).unwrap();
        for v in &d.graph().vertices {
            let strands: Vec<u8> = v.slots.iter().map(|s| s.unwrap().strand).collect();
            assert_eq!(strands[0], strands[2]);
            assert_eq!(strands[1], strands[3]);
            assert_ne!(strands[0], strands[1]);
        }
    }

    #[test]
    fn explicit_rule_round_trips() {
        let c = fixtures::trefoil::<f64>(256);
        let d = detect_crossings(&c, &CrossingRule::Alternating).unwrap();
        let e = detect_crossings(&c, &CrossingRule::Explicit(d.crossing_specs())).unwrap();
        assert_eq!(d, e);
        let bad = CrossingRule::Explicit(d.crossing_specs()[..2].to_vec());
        assert!(matches!(detect_crossings(&c, &bad), Err(Error::CrossingMismatch(_))));
    }

    #[test]
    fn edge_geometry_matches_crossings() {
        let d = detect_crossings(&fixtures::trefoil::<f64>(300), &CrossingRule::Alternating).unwrap();
        for e in &d.graph().edges {
            let p0 = e.polyline[0];
            let p1 = *e.polyline.last().unwrap();
            assert!(p0.dist(d.crossings()[e.start.0].position) < 1e-9);
            assert!(p1.dist(d.crossings()[e.end.0].position) < 1e-9);
        }
        let total: f64 = d
            .graph()
            .edges
            .iter()
            .map(|e| e.polyline.windows(2).map(|w| w[0].dist(w[1])).sum::<f64>())
            .sum();
        assert!((total - d.curve().length()).abs() < 1e-9);
    }
}
