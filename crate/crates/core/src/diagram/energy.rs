//! Resistance energies of a diagram.
//!
//! `RE = Σ 1/A` over alternated cycles; `MRE_δ = Σ (1/A - 1/δ)` over
//! alternated cycles of area below `δ`; `GMRE_δ` uses the same summand over
//! alternated cycles with at most three arcs and four-arc cycles, all of area
//! below `δ`.

use super::cycles::{enumerate_cycles_with, CycleOptions, DiagramCycle};
use super::graph::DiagramGraph;
use crate::error::{Error, Result};
use crate::real::Real;

/// Areas below this are treated as zero.
const SINGULAR_AREA: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Family {
    RE,
    MRE,
    GMRE,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CycleContribution<T> {
    /// Position of the cycle in the canonical enumeration order of the
    /// cycles that were examined.
    pub id: usize,
    pub arcs: usize,
    pub area: T,
    pub alternated: bool,
    pub contribution: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyBreakdown<T> {
    pub family: Family,
    pub delta: Option<T>,
    pub total: T,
    pub per_cycle: Vec<CycleContribution<T>>,
}

/// Which four-arc cycles enter `GMRE`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct GmreVariant {
    /// Require four-arc cycles to be alternated as well.
    pub alternated_four: bool,
}

/// Absolute shoelace area of a cycle.
pub fn cycle_area<T: Real>(cy: &DiagramCycle<T>) -> T {
    crate::real::signed_area(&cy.polyline).abs()
}

fn check_area<T: Real>(cy: &DiagramCycle<T>) -> Result<()> {
    if cy.area < T::lit(SINGULAR_AREA) {
        return Err(Error::SingularDiagram(cy.area.to_f64_lossy()));
    }
    Ok(())
}

fn breakdown<T: Real>(
    family: Family,
    delta: Option<T>,
    cycles: &[DiagramCycle<T>],
    keep: impl Fn(&DiagramCycle<T>) -> bool,
) -> Result<EnergyBreakdown<T>> {
    let mut per_cycle = Vec::new();
    let mut total = T::zero();
    for (id, cy) in cycles.iter().enumerate() {
        if !keep(cy) {
            continue;
        }
        check_area(cy)?;
        let contribution = match delta {
            Some(d) => T::one() / cy.area - T::one() / d,
            None => T::one() / cy.area,
        };
        total += contribution;
        per_cycle.push(CycleContribution {
            id,
            arcs: cy.arc_count(),
            area: cy.area,
            alternated: cy.alternated,
            contribution,
        });
    }
    Ok(EnergyBreakdown { family, delta, total, per_cycle })
}

/// `RE`: reciprocal areas of all alternated cycles.
pub fn resistance_energy<T: Real, G: AsRef<DiagramGraph<T>>>(g: &G) -> Result<EnergyBreakdown<T>> {
    let cycles = enumerate_cycles_with(g, &CycleOptions::default())?;
    breakdown(Family::RE, None, &cycles, |c| c.alternated)
}

/// Edge masks of the connected unions of faces with area below `delta`.
///
/// Faces sharing an edge are merged; the unbounded face is never small
/// since its traced area is negative.
pub fn low_area_domains<T: Real, G: AsRef<DiagramGraph<T>>>(g: &G, delta: T) -> Vec<Vec<bool>> {
    let g = g.as_ref();
    let faces = g.faces();
    let small: Vec<usize> = (0..faces.len())
        .filter(|&f| faces[f].signed_area > T::zero() && faces[f].signed_area < delta)
        .collect();
    let mut parent: Vec<usize> = (0..faces.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut owner = vec![usize::MAX; g.edges.len()];
    for &f in &small {
        for &(e, _) in &faces[f].boundary {
            if owner[e] == usize::MAX {
                owner[e] = f;
            } else {
                let (a, b) = (find(&mut parent, owner[e]), find(&mut parent, f));
                parent[a] = b;
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut masks: Vec<Vec<bool>> = Vec::new();
    for &f in &small {
        let r = find(&mut parent, f);
        let k = match roots.iter().position(|&x| x == r) {
            Some(k) => k,
            None => {
                roots.push(r);
                masks.push(vec![false; g.edges.len()]);
                roots.len() - 1
            }
        };
        for &(e, _) in &faces[f].boundary {
            masks[k][e] = true;
        }
    }
    masks
}

/// Cycles of area below `delta`, found inside the low-area domains.
///
/// A cycle of area below `delta` bounds a disk made of faces each of area
/// below `delta`, so it lies in the closure of one low-area domain.
fn critical_cycles<T: Real, G: AsRef<DiagramGraph<T>>>(
    g: &G,
    delta: T,
    arc_cap: Option<usize>,
) -> Result<Vec<DiagramCycle<T>>> {
    let graph = g.as_ref();
    if graph.free_loop.is_some() {
        return enumerate_cycles_with(g, &CycleOptions { area_cap: Some(delta), arc_cap, ..CycleOptions::default() });
    }
    let mut all = Vec::new();
    for mask in low_area_domains(g, delta) {
        let opts = CycleOptions { area_cap: Some(delta), arc_cap, edge_mask: Some(mask), ..CycleOptions::default() };
        all.extend(enumerate_cycles_with(g, &opts)?);
    }
    all.sort_by(|a, b| (a.arcs.len(), &a.canonical).cmp(&(b.arcs.len(), &b.canonical)));
    Ok(all)
}

fn check_delta<T: Real>(delta: T) -> Result<()> {
    if !(delta > T::zero()) {
        return Err(Error::OutOfRange(format!("delta must be positive, got {delta}")));
    }
    Ok(())
}

/// `MRE_δ` by the two-step low-area search.
pub fn mre<T: Real, G: AsRef<DiagramGraph<T>>>(g: &G, delta: T) -> Result<EnergyBreakdown<T>> {
    check_delta(delta)?;
    let cycles = critical_cycles(g, delta, None)?;
    breakdown(Family::MRE, Some(delta), &cycles, |c| c.alternated)
}

/// `GMRE_δ` with four-arc cycles admitted regardless of alternation.
pub fn gmre<T: Real, G: AsRef<DiagramGraph<T>>>(g: &G, delta: T) -> Result<EnergyBreakdown<T>> {
    gmre_with(g, delta, GmreVariant::default())
}

pub fn gmre_with<T: Real, G: AsRef<DiagramGraph<T>>>(
    g: &G,
    delta: T,
    variant: GmreVariant,
) -> Result<EnergyBreakdown<T>> {
    check_delta(delta)?;
    let cycles = critical_cycles(g, delta, Some(4))?;
    breakdown(Family::GMRE, Some(delta), &cycles, |c| {
        if c.arc_count() <= 3 {
            c.alternated
        } else {
            c.alternated || !variant.alternated_four
        }
    })
}

/// The cycles a family sums over at threshold `cap` (ignored for `RE`):
/// alternated cycles for `RE` and `MRE`, the `Γ` selection for `GMRE`.
pub fn family_cycles<T: Real, G: AsRef<DiagramGraph<T>>>(
    g: &G,
    family: Family,
    cap: T,
    variant: GmreVariant,
) -> Result<Vec<DiagramCycle<T>>> {
    let mut cycles = match family {
        Family::RE => enumerate_cycles_with(g, &CycleOptions::default())?,
        Family::MRE => critical_cycles(g, cap, None)?,
        Family::GMRE => critical_cycles(g, cap, Some(4))?,
    };
    cycles.retain(|c| match family {
        Family::GMRE if c.arc_count() == 4 => c.alternated || !variant.alternated_four,
        _ => c.alternated,
    });
    Ok(cycles)
}
