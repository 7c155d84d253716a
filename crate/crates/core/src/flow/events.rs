//! Matching crossings between nearby diagrams, carrying crossing types along
//! a deformation, and classifying changes as Reidemeister moves.

use crate::curve::ClosedCurve;
use crate::diagram::{find_intersections, KnotDiagram, RawCrossing};
use crate::error::Result;
use crate::real::{Point, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum EventKind {
    #[serde(rename = "R2_appear")]
    R2Appear,
    #[serde(rename = "R2_vanish")]
    R2Vanish,
    R3,
    #[serde(rename = "FORBIDDEN")]
    Forbidden,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowEvent<T> {
    pub iter: usize,
    pub kind: EventKind,
    pub location: Point<T>,
    pub crossing_delta: i64,
}

/// One passage through a crossing: curve parameter in samples, and whether
/// it is the over strand.
#[derive(Clone, Copy, Debug)]
struct PassageInfo<T> {
    param: T,
    over: bool,
}

#[derive(Clone, Copy, Debug)]
struct Site<T> {
    position: Point<T>,
    passages: [PassageInfo<T>; 2],
    /// `sin` of the crossing angle; a crossing of nearly tangent strands
    /// moves faster than the strands by its reciprocal.
    sin: T,
}

fn sites<T: Real>(d: &KnotDiagram<T>) -> Vec<Site<T>> {
    d.crossings()
        .iter()
        .map(|c| Site {
            position: c.position,
            passages: [
                PassageInfo { param: c.over_passage.param(), over: true },
                PassageInfo { param: c.under_passage.param(), over: false },
            ],
            sin: c.transversality_angle.sin(),
        })
        .collect()
}

fn circ<T: Real>(a: T, b: T, n: T) -> T {
    let d = (a - b).abs() % n;
    d.min(n - d)
}

/// Greedy matching of crossings of `a` to crossings of `b` lying within
/// `radius` (widened for shallow crossings), preferring pairs whose passages
/// sit at the closest curve parameters. Positions alone are ambiguous near a
/// triple point.
fn match_sites<T: Real>(a: &[Site<T>], b: &[Site<T>], radius: T, n: T) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let mut pairs: Vec<(T, T, usize, usize)> = Vec::new();
    for (i, s) in a.iter().enumerate() {
        for (j, t) in b.iter().enumerate() {
            let d = s.position.dist(t.position);
            let sin = s.sin.min(t.sin).max(T::lit(1e-3));
            if d * sin <= radius {
                pairs.push((param_distance(s, t, n), d, i, j));
            }
        }
    }
    pairs.sort_by(|x, y| (x.0, x.1).partial_cmp(&(y.0, y.1)).unwrap());
    let mut ab = vec![None; a.len()];
    let mut ba = vec![None; b.len()];
    for (_, _, i, j) in pairs {
        if ab[i].is_none() && ba[j].is_none() {
            ab[i] = Some(j);
            ba[j] = Some(i);
        }
    }
    (ab, ba)
}

/// Typical spacing of samples.
fn spacing<T: Real>(c: &ClosedCurve<T>) -> T {
    c.length() / T::from_usize_lossy(c.len())
}

/// Default matching radius: five times the largest sample displacement.
pub fn matching_radius<T: Real>(before: &ClosedCurve<T>, after: &ClosedCurve<T>) -> T {
    if before.len() != after.len() {
        return before.length().max(after.length()) / T::lit(10.0);
    }
    let m = before
        .points()
        .iter()
        .zip(after.points())
        .map(|(p, q)| p.dist(*q))
        .fold(T::zero(), T::max);
    T::lit(5.0) * m + T::tol(1e-9)
}

fn pairing_costs<T: Real>(s: &Site<T>, t: &Site<T>, n: T) -> (T, T) {
    let d0 = circ(s.passages[0].param, t.passages[0].param, n) + circ(s.passages[1].param, t.passages[1].param, n);
    let d1 = circ(s.passages[0].param, t.passages[1].param, n) + circ(s.passages[1].param, t.passages[0].param, n);
    (d0, d1)
}

/// Distance in curve parameter between the passages of two crossings.
fn param_distance<T: Real>(s: &Site<T>, t: &Site<T>, n: T) -> T {
    let (d0, d1) = pairing_costs(s, t, n);
    d0.min(d1)
}

/// Whether the two passages of `s` (over first) run along the same strands
/// as those of `t`: returns the permutation pairing `s.passages[0]` with
/// `t.passages[k]`.
fn strand_pairing<T: Real>(s: &Site<T>, t: &Site<T>, n: T) -> usize {
    let (d0, d1) = pairing_costs(s, t, n);
    if d0 <= d1 {
        0
    } else {
        1
    }
}

/// Two crossings of the same pair of strands have the same strand over.
fn same_strand_over<T: Real>(s: &Site<T>, t: &Site<T>, n: T) -> bool {
    // s.passages[0] is over; it pairs with t.passages[k]
    let k = strand_pairing(s, t, n);
    t.passages[k].over
}

/// Order of crossings along the curve, as indices into `sites`, each
/// crossing appearing twice.
fn gauss_word<T: Real>(sites: &[Site<T>], ids: &[usize]) -> Vec<usize> {
    let mut w: Vec<(T, usize)> = sites
        .iter()
        .zip(ids)
        .flat_map(|(s, &id)| s.passages.iter().map(move |p| (p.param, id)))
        .collect();
    w.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    w.into_iter().map(|(_, id)| id).collect()
}

/// Rotation of `w` closest to `reference`, position by position. The start
/// of the curve is arbitrary, so Gauss words are compared up to rotation.
fn aligned(reference: &[usize], w: &[usize]) -> Vec<usize> {
    let m = w.len();
    (0..m.max(1))
        .map(|r| {
            let rot: Vec<usize> = (0..m).map(|i| w[(i + r) % m]).collect();
            let miss = rot.iter().zip(reference).filter(|(x, y)| x != y).count();
            (miss, rot)
        })
        .min_by_key(|(miss, _)| *miss)
        .map(|(_, rot)| rot)
        .unwrap_or_default()
}

/// Whether two Gauss words agree up to rotation and up to swapping the labels
/// of two crossings closer than `close`, which matching cannot tell apart.
fn same_word<T: Real>(sites: &[Site<T>], wb: &[usize], wa: &[usize], close: T) -> bool {
    let wa = aligned(wb, wa);
    if wa == wb {
        return true;
    }
    let mut moved: Vec<usize> = wb.iter().zip(&wa).filter(|(x, y)| x != y).flat_map(|(x, y)| [*x, *y]).collect();
    moved.sort_unstable();
    moved.dedup();
    if let [x, y] = moved[..] {
        if sites[x].position.dist(sites[y].position) <= close {
            let swapped: Vec<usize> = wa.iter().map(|&c| if c == x { y } else if c == y { x } else { c }).collect();
            return swapped == wb;
        }
    }
    false
}

/// Classifies the change between two diagrams of nearby curves, using the
/// default matching radius. Returns `None` when nothing changed.
pub fn classify_event<T: Real>(before: &KnotDiagram<T>, after: &KnotDiagram<T>) -> Option<FlowEvent<T>> {
    classify_event_within(before, after, matching_radius(before.curve(), after.curve()))
}

pub fn classify_event_within<T: Real>(
    before: &KnotDiagram<T>,
    after: &KnotDiagram<T>,
    radius: T,
) -> Option<FlowEvent<T>> {
    let n = T::from_usize_lossy(before.curve().len());
    let sb = sites(before);
    let sa = sites(after);
    let delta = sa.len() as i64 - sb.len() as i64;
    let close = radius + T::lit(3.0) * spacing(before.curve()).max(spacing(after.curve()));
    let (ba, ab) = match_sites(&sb, &sa, radius, n);

    let event = |kind, pts: &[Point<T>]| {
        let k = T::from_usize_lossy(pts.len().max(1));
        let location = pts.iter().fold(Point::zero(), |acc, p| acc + *p) * (T::one() / k);
        Some(FlowEvent { iter: 0, kind, location, crossing_delta: delta })
    };

    // crossing-type flips on persisting crossings
    for (i, j) in ba.iter().enumerate() {
        if let Some(j) = *j {
            if !same_strand_over(&sb[i], &sa[j], n) {
                return event(EventKind::Forbidden, &[sb[i].position]);
            }
        }
    }
    let lost: Vec<usize> = (0..sb.len()).filter(|&i| ba[i].is_none()).collect();
    let new: Vec<usize> = (0..sa.len()).filter(|&j| ab[j].is_none()).collect();

    let r2 = |pair: &[Site<T>]| pair[0].position.dist(pair[1].position) <= close && same_strand_over(&pair[0], &pair[1], n);
    match delta {
        -2 if lost.len() == 2 && new.is_empty() => {
            let pair = [sb[lost[0]], sb[lost[1]]];
            let pts = [pair[0].position, pair[1].position];
            return event(if r2(&pair) { EventKind::R2Vanish } else { EventKind::Forbidden }, &pts);
        }
        2 if new.len() == 2 && lost.is_empty() => {
            let pair = [sa[new[0]], sa[new[1]]];
            let pts = [pair[0].position, pair[1].position];
            return event(if r2(&pair) { EventKind::R2Appear } else { EventKind::Forbidden }, &pts);
        }
        0 if lost.is_empty() && new.is_empty() => {}
        _ => {
            let pts: Vec<Point<T>> =
                lost.iter().map(|&i| sb[i].position).chain(new.iter().map(|&j| sa[j].position)).collect();
            return event(EventKind::Forbidden, &pts);
        }
    }

    // same crossings: look for a reordering along the curve
    let ids_b: Vec<usize> = (0..sb.len()).collect();
    let ids_a: Vec<usize> = (0..sa.len()).map(|j| ab[j].unwrap()).collect();
    let wb = gauss_word(&sb, &ids_b);
    let wa = gauss_word(&sa, &ids_a);
    if same_word(&sb, &wb, &wa, close) {
        return None;
    }
    // the start of the curve is arbitrary: any rotation of the word that
    // differs by a local triangle move is a third move
    let m = wa.len();
    let mut fallback: Option<(usize, Vec<usize>)> = None;
    for r in 0..m {
        let rot: Vec<usize> = (0..m).map(|i| wa[(i + r) % m]).collect();
        let mut moved: Vec<usize> = wb.iter().zip(&rot).filter(|(x, y)| x != y).flat_map(|(x, y)| [*x, *y]).collect();
        moved.sort_unstable();
        moved.dedup();
        if is_r3(&sb, &moved, close, n) {
            let pts: Vec<Point<T>> = moved.iter().map(|&i| sb[i].position).collect();
            return event(EventKind::R3, &pts);
        }
        if fallback.as_ref().is_none_or(|(k, _)| moved.len() < *k) {
            fallback = Some((moved.len(), moved));
        }
    }
    let moved = fallback.map(|(_, m)| m).unwrap_or_default();
    let pts: Vec<Point<T>> = moved.iter().map(|&i| sb[i].position).collect();
    event(EventKind::Forbidden, &pts)
}

/// Three mutually close crossings whose strands are stacked consistently.
fn is_r3<T: Real>(sb: &[Site<T>], moved: &[usize], close: T, n: T) -> bool {
    if moved.len() != 3 {
        return false;
    }
    let tri: Vec<Site<T>> = moved.iter().map(|&i| sb[i]).collect();
    for a in 0..3 {
        for b in a + 1..3 {
            if tri[a].position.dist(tri[b].position) > close {
                return false;
            }
        }
    }
    !height_order_is_cyclic(&tri, n)
}

/// Groups the six passages of a triangle into three strands and checks
/// whether "passes over" is cyclic among them.
fn height_order_is_cyclic<T: Real>(tri: &[Site<T>], n: T) -> bool {
    // strand label of passage (crossing c, slot k)
    let mut label = [[usize::MAX; 2]; 3];
    let mut next = 0;
    for c in 0..3 {
        for k in 0..2 {
            if label[c][k] != usize::MAX {
                continue;
            }
            // nearest passage on another crossing
            let mut best = (T::infinity(), 0, 0);
            for c2 in 0..3 {
                if c2 == c {
                    continue;
                }
                for k2 in 0..2 {
                    let d = circ(tri[c].passages[k].param, tri[c2].passages[k2].param, n);
                    if d < best.0 && label[c2][k2] == usize::MAX {
                        best = (d, c2, k2);
                    }
                }
            }
            label[c][k] = next;
            if best.0.is_finite() {
                label[best.1][best.2] = next;
            }
            next += 1;
        }
    }
    if next != 3 {
        return true;
    }
    // each crossing: over strand beats under strand
    let mut wins = [0usize; 3];
    for l in label {
        wins[l[0]] += 1;
    }
    wins.iter().all(|&w| w == 1)
}

/// Detects the crossings of `curve` and assigns their types by continuity
/// from `before`. Returns the diagram and whether the crossing census
/// changed (crossings created, destroyed or reordered).
pub fn carry_types<T: Real>(before: &KnotDiagram<T>, curve: ClosedCurve<T>, radius: T) -> Result<(KnotDiagram<T>, bool)> {
    let raw = find_intersections(&curve)?;
    let n = T::from_usize_lossy(curve.len());
    let sb = sites(before);
    let as_site = |r: &RawCrossing<T>, a_over: bool| Site {
        position: r.position,
        passages: if a_over {
            [PassageInfo { param: r.a.param(), over: true }, PassageInfo { param: r.b.param(), over: false }]
        } else {
            [PassageInfo { param: r.b.param(), over: true }, PassageInfo { param: r.a.param(), over: false }]
        },
        sin: r.angle.sin(),
    };
    let untyped: Vec<Site<T>> = raw.iter().map(|r| as_site(r, true)).collect();
    let (ba, ab) = match_sites(&sb, &untyped, radius, n);
    let mut changed = sb.len() != raw.len() || ba.iter().any(Option::is_none);

    let mut flags: Vec<Option<bool>> = vec![None; raw.len()];
    for (j, m) in ab.iter().enumerate() {
        if let Some(i) = *m {
            let prev_over = sb[i].passages[0].param;
            flags[j] = Some(circ(raw[j].a.param(), prev_over, n) <= circ(raw[j].b.param(), prev_over, n));
        }
    }
    // new crossings come in pairs sharing their over strand
    let mut fresh: Vec<usize> = (0..raw.len()).filter(|&j| flags[j].is_none()).collect();
    while let Some(j) = fresh.pop() {
        flags[j] = Some(true);
        let anchor = as_site(&raw[j], true);
        if let Some(k) = (0..fresh.len()).min_by(|&x, &y| {
            let dx = raw[fresh[x]].position.dist(raw[j].position);
            let dy = raw[fresh[y]].position.dist(raw[j].position);
            dx.partial_cmp(&dy).unwrap()
        }) {
            let other = fresh.swap_remove(k);
            let probe = as_site(&raw[other], true);
            let pairing = strand_pairing(&anchor, &probe, n);
            // over strand of `anchor` pairs with passage `pairing` of probe (probe[0] = a)
            flags[other] = Some(pairing == 0);
        }
    }
    let flags: Vec<bool> = flags.into_iter().map(Option::unwrap).collect();
    let after = KnotDiagram::assemble(curve, &raw, &flags);
    if !changed {
        let ids_b: Vec<usize> = (0..sb.len()).collect();
        let sa = sites(&after);
        let (_, ab) = match_sites(&sb, &sa, radius, n);
        if ab.iter().any(Option::is_none) {
            changed = true;
        } else {
            let ids_a: Vec<usize> = ab.iter().map(|m| m.unwrap()).collect();
            let close = radius + T::lit(3.0) * spacing(before.curve()).max(spacing(after.curve()));
            changed = !same_word(&sb, &gauss_word(&sb, &ids_b), &gauss_word(&sa, &ids_a), close);
        }
    }
    Ok((after, changed))
}
