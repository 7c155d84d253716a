//! The planar map underlying a diagram: 4-valent vertices (crossings) whose
//! half-edges carry strand and over/under labels, joined by polyline edges.

use crate::real::{signed_area, Point, Real};

/// Which strand of a crossing a half-edge belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Over,
    Under,
}

impl Level {
    pub fn flip(self) -> Self {
        match self {
            Level::Over => Level::Under,
            Level::Under => Level::Over,
        }
    }
}

/// One end of an edge at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slot {
    pub edge: usize,
    /// `true` when the edge starts at this vertex.
    pub at_start: bool,
    /// Half-edges with equal `strand` are opposite (straight through).
    pub strand: u8,
    pub level: Level,
}

/// A crossing of the planar map. Slots are stored in counterclockwise order
/// of their outgoing directions; missing slots occur on the boundary of a
/// lattice region.
#[derive(Clone, Debug, PartialEq)]
pub struct Vertex<T> {
    pub position: Point<T>,
    pub slots: [Option<Slot>; 4],
}

impl<T> Vertex<T> {
    pub fn slot(&self, k: usize) -> Slot {
        self.slots[k].expect("slot present")
    }

    /// Index of the slot holding the given edge end.
    pub fn slot_of(&self, edge: usize, at_start: bool) -> Option<usize> {
        self.slots
            .iter()
            .position(|s| matches!(s, Some(s) if s.edge == edge && s.at_start == at_start))
    }
}

/// Point of an edge polyline, recorded symbolically so that the polyline can
/// be re-evaluated after the underlying samples move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TracePoint {
    /// Curve sample `i`.
    Sample(usize),
    /// Vertex `v` of the map.
    Vertex(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge<T> {
    pub start: (usize, usize),
    pub end: (usize, usize),
    pub polyline: Vec<Point<T>>,
    pub trace: Vec<TracePoint>,
}

/// A planar map with labelled half-edges.
///
/// A map without vertices but with a single closed edge describes an
/// embedded closed curve.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DiagramGraph<T> {
    pub vertices: Vec<Vertex<T>>,
    pub edges: Vec<Edge<T>>,
    /// Polyline of a crossing-free closed curve, if that is what the map is.
    pub free_loop: Option<Vec<Point<T>>>,
}

/// A face of the map traced with the face on the left.
#[derive(Clone, Debug, PartialEq)]
pub struct Face<T> {
    /// `(edge, forward)` pairs in traversal order.
    pub boundary: Vec<(usize, bool)>,
    pub signed_area: T,
}

impl<T: Real> DiagramGraph<T> {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Other end of the edge leaving `(v, slot)`.
    pub fn across(&self, v: usize, slot: usize) -> (usize, usize) {
        let s = self.vertices[v].slot(slot);
        let e = &self.edges[s.edge];
        if s.at_start {
            e.end
        } else {
            e.start
        }
    }

    /// Polyline of the edge at `(v, slot)` oriented away from `v`.
    pub fn oriented_polyline(&self, v: usize, slot: usize) -> Vec<Point<T>> {
        let s = self.vertices[v].slot(slot);
        let e = &self.edges[s.edge];
        if s.at_start {
            e.polyline.clone()
        } else {
            e.polyline.iter().rev().copied().collect()
        }
    }

    /// Next present slot clockwise from `slot`.
    fn clockwise_next(&self, v: usize, slot: usize) -> usize {
        let slots = &self.vertices[v].slots;
        for step in 1..=4 {
            let k = (slot + 4 - step) % 4;
            if slots[k].is_some() {
                return k;
            }
        }
        slot
    }

    /// All faces, each traced once with the face on its left.
    pub fn faces(&self) -> Vec<Face<T>> {
        let mut seen = vec![[false; 2]; self.edges.len()];
        let mut faces = Vec::new();
        for e0 in 0..self.edges.len() {
            for dir0 in [true, false] {
                if seen[e0][dir0 as usize] {
                    continue;
                }
                let mut boundary = Vec::new();
                let mut poly: Vec<Point<T>> = Vec::new();
                let (mut e, mut fwd) = (e0, dir0);
                loop {
                    seen[e][fwd as usize] = true;
                    boundary.push((e, fwd));
                    let edge = &self.edges[e];
                    if fwd {
                        poly.extend(edge.polyline.iter().take(edge.polyline.len() - 1));
                    } else {
                        poly.extend(edge.polyline.iter().rev().take(edge.polyline.len() - 1));
                    }
                    let (w, s_in) = if fwd { edge.end } else { edge.start };
                    let s_out = self.clockwise_next(w, s_in);
                    let next = self.vertices[w].slot(s_out);
                    e = next.edge;
                    fwd = next.at_start;
                    if e == e0 && fwd == dir0 {
                        break;
                    }
                }
                faces.push(Face { boundary, signed_area: signed_area(&poly) });
            }
        }
        faces
    }

    /// Recomputes the vertex positions and edge polylines from samples.
    pub fn reevaluate(&mut self, sample: impl Fn(usize) -> Point<T>, vertex: impl Fn(usize) -> Point<T>) {
        for (v, vert) in self.vertices.iter_mut().enumerate() {
            vert.position = vertex(v);
        }
        for e in &mut self.edges {
            for (p, t) in e.polyline.iter_mut().zip(&e.trace) {
                *p = match *t {
                    TracePoint::Sample(i) => sample(i),
                    TracePoint::Vertex(v) => vertex(v),
                };
            }
        }
    }
}
