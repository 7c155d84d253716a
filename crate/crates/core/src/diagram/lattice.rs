//! The lattice graphs `G(n)` (the grid on `(n+1)²` vertices) and the woven
//! diagrams `G*(n)` with checkerboard crossings.

use rayon::prelude::*;

use super::cycles::{enumerate_cycles_with, CycleOptions};
use super::graph::{DiagramGraph, Edge, Level, Slot, TracePoint, Vertex};
use crate::error::{Error, Result};
use crate::real::{Point, Real};

/// Slot order at a lattice vertex (counterclockwise).
const EAST: usize = 0;
const NORTH: usize = 1;
const WEST: usize = 2;
const SOUTH: usize = 3;

fn check_range(n: usize, max: usize) -> Result<()> {
    if !(1..=max).contains(&n) {
        return Err(Error::OutOfRange(format!("lattice size {n} outside 1..={max}")));
    }
    Ok(())
}

/// Number of vertex-simple cycles in the grid with `(n+1)²` vertices.
pub fn grid_cycle_count(n: usize) -> Result<u64> {
    check_range(n, 6)?;
    let w = n + 1;
    let v = w * w;
    let nbr: Vec<u64> = (0..v)
        .map(|k| {
            let (i, j) = (k % w, k / w);
            let mut m = 0u64;
            if i > 0 {
                m |= 1 << (k - 1);
            }
            if i + 1 < w {
                m |= 1 << (k + 1);
            }
            if j > 0 {
                m |= 1 << (k - w);
            }
            if j + 1 < w {
                m |= 1 << (k + w);
            }
            m
        })
        .collect();
    let full = if v == 64 { u64::MAX } else { (1u64 << v) - 1 };
    let twice: u64 = (0..v)
        .into_par_iter()
        .map(|a| {
            let allowed = full & !((1u64 << (a + 1)) - 1);
            count_paths(a, a, 1u64 << a, 1, allowed, &nbr)
        })
        .sum();
    Ok(twice / 2)
}

/// Closed paths from `anchor` through `allowed` vertices, each counted once
/// per direction.
fn count_paths(anchor: usize, v: usize, visited: u64, len: u32, allowed: u64, nbr: &[u64]) -> u64 {
    let mut count = 0;
    if len >= 3 && nbr[v] & (1 << anchor) != 0 {
        count += 1;
    }
    let mut next = nbr[v] & allowed & !visited;
    while next != 0 {
        let u = next.trailing_zeros() as usize;
        next &= next - 1;
        count += count_paths(anchor, u, visited | (1 << u), len + 1, allowed, nbr);
    }
    count
}

/// The lattice as a planar map with unit spacing. Strand 0 is horizontal.
/// When `woven`, the horizontal strand is over at `(i, j)` iff `i + j` is
/// even; otherwise it is over everywhere.
pub fn lattice_graph<T: Real>(n: usize, woven: bool) -> DiagramGraph<T> {
    let w = n + 1;
    let id = |i: usize, j: usize| j * w + i;
    let horizontal_level = |i: usize, j: usize| {
        if !woven || (i + j) % 2 == 0 {
            Level::Over
        } else {
            Level::Under
        }
    };
    let mut vertices: Vec<Vertex<T>> = (0..w * w)
        .map(|k| Vertex {
            position: Point::new(T::from_usize_lossy(k % w), T::from_usize_lossy(k / w)),
            slots: [None; 4],
        })
        .collect();
    let mut edges = Vec::new();
    for j in 0..w {
        for i in 0..w {
            for (di, dj, out, inn, strand) in [(1, 0, EAST, WEST, 0u8), (0, 1, NORTH, SOUTH, 1u8)] {
                let (i2, j2) = (i + di, j + dj);
                if i2 >= w || j2 >= w {
                    continue;
                }
                let (a, b) = (id(i, j), id(i2, j2));
                let e = edges.len();
                let lvl = |i: usize, j: usize| {
                    let h = horizontal_level(i, j);
                    if strand == 0 {
                        h
                    } else {
                        h.flip()
                    }
                };
                vertices[a].slots[out] = Some(Slot { edge: e, at_start: true, strand, level: lvl(i, j) });
                vertices[b].slots[inn] = Some(Slot { edge: e, at_start: false, strand, level: lvl(i2, j2) });
                edges.push(Edge {
                    start: (a, out),
                    end: (b, inn),
                    polyline: vec![vertices[a].position, vertices[b].position],
                    trace: vec![TracePoint::Vertex(a), TracePoint::Vertex(b)],
                });
            }
        }
    }
    DiagramGraph { vertices, edges, free_loop: None }
}

/// `C(n, k)` as `u64`.
pub fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of alternated cycles of `G*(n)`.
///
/// Fails if the count is below `C(n, ⌊n/2⌋) - 1`, the number of alternated
/// Young-diagram boundaries guaranteed to exist.
pub fn gstar_alternated_count(n: usize) -> Result<u64> {
    check_range(n, 4)?;
    let g = lattice_graph::<f64>(n, true);
    let cycles = enumerate_cycles_with(&g, &CycleOptions::default())?;
    let count = cycles.iter().filter(|c| c.alternated).count() as u64;
    let bound = binomial(n as u64, n as u64 / 2) - 1;
    if count < bound {
        return Err(Error::Invalid(format!("G*({n}) has {count} alternated cycles, fewer than {bound}")));
    }
    Ok(count)
}

/// Partitions fitting in an `n × n` box, as row lengths from the bottom row.
pub fn young_shapes(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for part in 0..=max {
            cur.push(part);
            rec(n, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out.retain(|s| s.iter().any(|&p| p > 0));
    out
}

/// Boundary of a Young shape as a closed vertex path of the lattice, or
/// `None` if the boundary is not a simple cycle.
pub fn young_boundary(shape: &[usize]) -> Option<Vec<(usize, usize)>> {
    let inside = |i: isize, j: isize| {
        i >= 0 && j >= 0 && (j as usize) < shape.len() && (i as usize) < shape[j as usize]
    };
    // boundary edges between lattice vertices
    let mut adj: std::collections::BTreeMap<(usize, usize), Vec<(usize, usize)>> = Default::default();
    let mut add = |a: (usize, usize), b: (usize, usize)| {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    };
    let h = shape.len() as isize + 1;
    let w = shape.iter().copied().max().unwrap_or(0) as isize + 1;
    for j in 0..h {
        for i in 0..w {
            // horizontal edge (i, j)-(i+1, j) separates cells (i, j-1) and (i, j)
            if inside(i, j - 1) != inside(i, j) {
                add((i as usize, j as usize), (i as usize + 1, j as usize));
            }
            // vertical edge (i, j)-(i, j+1) separates cells (i-1, j) and (i, j)
            if inside(i - 1, j) != inside(i, j) {
                add((i as usize, j as usize), (i as usize, j as usize + 1));
            }
        }
    }
    if adj.values().any(|v| v.len() != 2) {
        return None;
    }
    let start = *adj.keys().next()?;
    let mut path = vec![start];
    let mut prev = start;
    let mut cur = adj[&start][0];
    while cur != start {
        path.push(cur);
        let nb = &adj[&cur];
        let next = if nb[0] == prev { nb[1] } else { nb[0] };
        prev = cur;
        cur = next;
    }
    (path.len() == adj.len()).then_some(path)
}

/// Whether a closed lattice path is alternated in the woven lattice: every
/// straight run between turns has odd length.
pub fn woven_path_alternated(path: &[(usize, usize)]) -> bool {
    let m = path.len();
    let dir = |k: usize| {
        let (a, b) = (path[k], path[(k + 1) % m]);
        (b.0 as isize - a.0 as isize, b.1 as isize - a.1 as isize)
    };
    let turns: Vec<usize> = (0..m).filter(|&k| dir((k + m - 1) % m) != dir(k)).collect();
    turns.iter().enumerate().all(|(t, &k)| {
        let next = turns[(t + 1) % turns.len()];
        let len = (next + m - k) % m;
        let len = if len == 0 { m } else { len };
        len % 2 == 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::enumerate_cycles;

    #[test]
    fn small_grid_counts() {
        assert_eq!(grid_cycle_count(1).unwrap(), 1);
        assert_eq!(grid_cycle_count(2).unwrap(), 13);
        assert_eq!(grid_cycle_count(3).unwrap(), 213);
        assert!(grid_cycle_count(0).is_err());
        assert!(grid_cycle_count(7).is_err());
    }

    #[test]
    fn diagram_enumeration_agrees_with_bitmask_count() {
        for n in 1..=3 {
            let g = lattice_graph::<f64>(n, false);
            let cycles = enumerate_cycles(&g, None, None).unwrap();
            assert_eq!(cycles.len() as u64, grid_cycle_count(n).unwrap());
        }
    }

    #[test]
    fn lattice_faces_are_unit_squares() {
        let g = lattice_graph::<f64>(3, true);
        let faces = g.faces();
        let inner: Vec<f64> = faces.iter().map(|f| f.signed_area).filter(|a| *a > 0.0).collect();
        assert_eq!(inner.len(), 9);
        assert!(inner.iter().all(|a| (a - 1.0).abs() < 1e-12));
        assert_eq!(faces.len(), 10);
    }

    #[test]
    fn young_shape_count_is_central_binomial() {
        for n in 1..=5 {
            let shapes = young_shapes(n);
            assert_eq!(shapes.len() as u64, binomial(2 * n as u64, n as u64) - 1);
            assert!(shapes.iter().all(|s| young_boundary(s).is_some()));
        }
    }

    #[test]
    fn unit_square_is_alternated_in_woven_lattice() {
        let sq = [(0, 0), (1, 0), (1, 1), (0, 1)];
        assert!(woven_path_alternated(&sq));
        let rect = [(0, 0), (1, 0), (2, 0), (2, 1), (1, 1), (0, 1)];
        assert!(!woven_path_alternated(&rect));
    }

    #[test]
    fn woven_rule_matches_diagram_alternation() {
        let g = lattice_graph::<f64>(3, true);
        for c in enumerate_cycles(&g, None, None).unwrap() {
            let path: Vec<(usize, usize)> = c
                .visits
                .iter()
                .map(|v| {
                    let p = g.vertices[v.vertex].position;
                    (p.x as usize, p.y as usize)
                })
                .collect();
            assert_eq!(woven_path_alternated(&path), c.alternated);
        }
    }

    /// Alternated cycles of `G*(n)` by brute force over edge subsets.
    fn brute_force_alternated(n: usize) -> u64 {
        let w = n + 1;
        let mut edges = Vec::new();
        for j in 0..w {
            for i in 0..w {
                if i + 1 < w {
                    edges.push(((i, j), (i + 1, j)));
                }
                if j + 1 < w {
                    edges.push(((i, j), (i, j + 1)));
                }
            }
        }
        let id = |p: (usize, usize)| p.1 * w + p.0;
        let mut count = 0;
        for mask in 1u32..(1 << edges.len()) {
            let mut deg = vec![0u8; w * w];
            let mut adj = vec![Vec::new(); w * w];
            for (k, &(a, b)) in edges.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    deg[id(a)] += 1;
                    deg[id(b)] += 1;
                    adj[id(a)].push(b);
                    adj[id(b)].push(a);
                }
            }
            if deg.iter().any(|&d| d != 0 && d != 2) {
                continue;
            }
            let start = edges[mask.trailing_zeros() as usize].0;
            let mut path = vec![start];
            let (mut prev, mut cur) = (start, adj[id(start)][0]);
            while cur != start {
                path.push(cur);
                let nb = &adj[id(cur)];
                let next = if nb[0] == prev { nb[1] } else { nb[0] };
                prev = cur;
                cur = next;
            }
            if path.len() as u32 != mask.count_ones() {
                continue;
            }
            if woven_path_alternated(&path) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn gstar_counts_match_brute_force() {
        for n in 1..=3 {
            assert_eq!(gstar_alternated_count(n).unwrap(), brute_force_alternated(n), "n = {n}");
        }
    }

    #[test]
    fn gstar_three_regression() {
        assert_eq!(gstar_alternated_count(3).unwrap(), GSTAR3);
    }

    const GSTAR3: u64 = 35;
}
