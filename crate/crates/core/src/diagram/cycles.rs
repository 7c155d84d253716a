//! Embedded cycles of a diagram.
//!
//! A cycle visits each crossing at most once and either passes straight
//! through it (opposite half-edges, same strand) or turns there (adjacent
//! half-edges, different strands). Arcs run between consecutive turns.
//!
//! Enumeration anchors every cycle at its smallest crossing and only extends
//! through larger ones; of the two traversal directions the one whose first
//! half-edge is smaller is kept.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use super::graph::{DiagramGraph, Level};
use crate::error::{Error, Result};
use crate::real::{signed_area, Point, Real};

/// Default hard limit on the number of enumerated cycles.
pub const DEFAULT_CYCLE_LIMIT: u64 = 10_000_000;

/// How a cycle passes through a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Straight,
    Turn,
}

/// One crossing on a cycle: enters through `in_slot`, leaves through `out_slot`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleVisit {
    pub vertex: usize,
    pub in_slot: usize,
    pub out_slot: usize,
    pub mode: Mode,
}

/// A maximal piece of a cycle between two turns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    /// Turn crossing where the arc starts and the level it leaves on.
    pub start: Option<(usize, Level)>,
    /// Turn crossing where the arc ends and the level it arrives on.
    pub end: Option<(usize, Level)>,
    /// Crossings passed straight through.
    pub straight: Vec<usize>,
    pub alternated: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagramCycle<T> {
    /// Visits in traversal order; `edges[i]` joins `visits[i]` to `visits[i + 1]`.
    pub visits: Vec<CycleVisit>,
    pub edges: Vec<usize>,
    pub arcs: Vec<Arc>,
    pub turn_crossings: Vec<usize>,
    pub area: T,
    pub alternated: bool,
    pub polyline: Vec<Point<T>>,
    /// Least rotation/reflection of the crossing/edge sequence.
    pub canonical: Vec<usize>,
}

impl<T> DiagramCycle<T> {
    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }
}

/// Filters and limits for [`enumerate_cycles_with`].
#[derive(Clone, Debug, PartialEq)]
pub struct CycleOptions<T> {
    /// Keep cycles with area strictly below this.
    pub area_cap: Option<T>,
    /// Keep cycles with at most this many arcs.
    pub arc_cap: Option<usize>,
    /// Only edges marked `true` may be used.
    pub edge_mask: Option<Vec<bool>>,
    pub limit: u64,
}

impl<T> Default for CycleOptions<T> {
    fn default() -> Self {
        Self { area_cap: None, arc_cap: None, edge_mask: None, limit: DEFAULT_CYCLE_LIMIT }
    }
}

/// All cycles of `g` with the given caps, in canonical order.
pub fn enumerate_cycles<T: Real, G: AsRef<DiagramGraph<T>>>(
    g: &G,
    area_cap: Option<T>,
    arc_cap: Option<usize>,
) -> Result<Vec<DiagramCycle<T>>> {
    enumerate_cycles_with(g, &CycleOptions { area_cap, arc_cap, ..CycleOptions::default() })
}

pub fn enumerate_cycles_with<T: Real, G: AsRef<DiagramGraph<T>>>(
    g: &G,
    opts: &CycleOptions<T>,
) -> Result<Vec<DiagramCycle<T>>> {
    let g = g.as_ref();
    if let Some(points) = &g.free_loop {
        return Ok(free_loop_cycle(points, opts).into_iter().collect());
    }
    let found = AtomicU64::new(0);
    let per_anchor: Vec<Result<Vec<DiagramCycle<T>>>> = (0..g.vertices.len())
        .into_par_iter()
        .map(|anchor| {
            let mut s = Search {
                g,
                opts,
                anchor,
                first: (0, 0),
                visited: vec![false; g.vertices.len()],
                visits: Vec::new(),
                edges: Vec::new(),
                out: Vec::new(),
                found: &found,
            };
            s.run()?;
            Ok(s.out)
        })
        .collect();
    let mut all = Vec::new();
    for r in per_anchor {
        all.extend(r?);
    }
    all.sort_by(|a, b| (a.arcs.len(), &a.canonical).cmp(&(b.arcs.len(), &b.canonical)));
    Ok(all)
}

fn free_loop_cycle<T: Real>(points: &[Point<T>], opts: &CycleOptions<T>) -> Option<DiagramCycle<T>> {
    let area = signed_area(points).abs();
    if matches!(opts.area_cap, Some(cap) if area >= cap) || opts.arc_cap == Some(0) {
        return None;
    }
    Some(DiagramCycle {
        visits: vec![],
        edges: vec![],
        arcs: vec![Arc { start: None, end: None, straight: vec![], alternated: true }],
        turn_crossings: vec![],
        area,
        alternated: true,
        polyline: points.to_vec(),
        canonical: vec![],
    })
}

struct Search<'a, T> {
    g: &'a DiagramGraph<T>,
    opts: &'a CycleOptions<T>,
    anchor: usize,
    /// (edge, slot) of the first half-edge used at the anchor.
    first: (usize, usize),
    visited: Vec<bool>,
    visits: Vec<CycleVisit>,
    edges: Vec<usize>,
    out: Vec<DiagramCycle<T>>,
    found: &'a AtomicU64,
}

impl<T: Real> Search<'_, T> {
    fn allowed(&self, edge: usize) -> bool {
        self.opts.edge_mask.as_ref().map_or(true, |m| m[edge])
    }

    fn run(&mut self) -> Result<()> {
        let a = self.anchor;
        self.visited[a] = true;
        for s0 in 0..4 {
            let Some(slot) = self.g.vertices[a].slots[s0] else { continue };
            if !self.allowed(slot.edge) {
                continue;
            }
            self.first = (slot.edge, s0);
            self.visits.push(CycleVisit { vertex: a, in_slot: usize::MAX, out_slot: s0, mode: Mode::Straight });
            self.edges.push(slot.edge);
            let (w, sw) = self.g.across(a, s0);
            self.extend(w, sw, 0)?;
            self.edges.pop();
            self.visits.pop();
        }
        Ok(())
    }

    fn strand(&self, v: usize, s: usize) -> u8 {
        self.g.vertices[v].slot(s).strand
    }

    fn extend(&mut self, v: usize, s_in: usize, turns: usize) -> Result<()> {
        if v == self.anchor {
            return self.close(s_in, turns);
        }
        if v < self.anchor || self.visited[v] {
            return Ok(());
        }
        self.visited[v] = true;
        let strand_in = self.strand(v, s_in);
        for s_out in 0..4 {
            if s_out == s_in {
                continue;
            }
            let Some(slot) = self.g.vertices[v].slots[s_out] else { continue };
            if !self.allowed(slot.edge) {
                continue;
            }
            let mode = if slot.strand == strand_in { Mode::Straight } else { Mode::Turn };
            let t = turns + (mode == Mode::Turn) as usize;
            if matches!(self.opts.arc_cap, Some(cap) if t > cap) {
                continue;
            }
            self.visits.push(CycleVisit { vertex: v, in_slot: s_in, out_slot: s_out, mode });
            self.edges.push(slot.edge);
            let (w, sw) = self.g.across(v, s_out);
            let r = self.extend(w, sw, t);
            self.edges.pop();
            self.visits.pop();
            r?;
        }
        self.visited[v] = false;
        Ok(())
    }

    fn close(&mut self, s_last: usize, turns: usize) -> Result<()> {
        let a = self.anchor;
        let e_last = *self.edges.last().unwrap();
        if s_last == self.first.1 || (self.first.0, self.first.1) > (e_last, s_last) {
            return Ok(());
        }
        let mode = if self.strand(a, s_last) == self.strand(a, self.first.1) { Mode::Straight } else { Mode::Turn };
        let t = turns + (mode == Mode::Turn) as usize;
        if matches!(self.opts.arc_cap, Some(cap) if t > cap) {
            return Ok(());
        }
        let mut visits = self.visits.clone();
        visits[0].in_slot = s_last;
        visits[0].mode = mode;
        let cycle = build_cycle(self.g, visits, self.edges.clone());
        if matches!(self.opts.area_cap, Some(cap) if cycle.area >= cap) {
            return Ok(());
        }
        let n = self.found.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.opts.limit {
            return Err(Error::CycleExplosion { limit: self.opts.limit, partial: n - 1 });
        }
        self.out.push(cycle);
        Ok(())
    }
}

fn build_cycle<T: Real>(g: &DiagramGraph<T>, visits: Vec<CycleVisit>, edges: Vec<usize>) -> DiagramCycle<T> {
    let m = visits.len();
    let mut polyline = Vec::new();
    for v in &visits {
        let p = g.oriented_polyline(v.vertex, v.out_slot);
        polyline.extend_from_slice(&p[..p.len() - 1]);
    }
    let area = signed_area(&polyline).abs();

    let level = |v: usize, s: usize| g.vertices[v].slot(s).level;
    let turns: Vec<usize> = (0..m).filter(|&i| visits[i].mode == Mode::Turn).collect();
    let mut arcs = Vec::with_capacity(turns.len());
    for (k, &i) in turns.iter().enumerate() {
        let j = turns[(k + 1) % turns.len()];
        let mut straight = Vec::new();
        let mut p = (i + 1) % m;
        while p != j {
            straight.push(visits[p].vertex);
            p = (p + 1) % m;
        }
        let start = (visits[i].vertex, level(visits[i].vertex, visits[i].out_slot));
        let end = (visits[j].vertex, level(visits[j].vertex, visits[j].in_slot));
        arcs.push(Arc { start: Some(start), end: Some(end), straight, alternated: start.1 != end.1 });
    }
    let alternated = arcs.iter().all(|a| a.alternated);
    let turn_crossings = turns.iter().map(|&i| visits[i].vertex).collect();
    let canonical = canonical_form(&visits, &edges);
    DiagramCycle { visits, edges, arcs, turn_crossings, area, alternated, polyline, canonical }
}

/// Least rotation/reflection of `[v0, e0, v1, e1, ...]`.
fn canonical_form(visits: &[CycleVisit], edges: &[usize]) -> Vec<usize> {
    let m = visits.len();
    let mut best: Option<Vec<usize>> = None;
    for r in 0..m {
        let fwd: Vec<usize> = (0..m).flat_map(|k| [visits[(r + k) % m].vertex, edges[(r + k) % m]]).collect();
        let rev: Vec<usize> = (0..m)
            .flat_map(|k| [visits[(r + m - k) % m].vertex, edges[(r + 2 * m - k - 1) % m]])
            .collect();
        for cand in [fwd, rev] {
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}
