//! JSON formats read and written by the command-line tool.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::curve::{ClosedCurve, GaussRep};
use crate::diagram::{detect_crossings, CrossingRule, CrossingSpec, DiagramCycle, EnergyBreakdown, Family, KnotDiagram};
use crate::error::{Error, Result};
use crate::flow::{EnergyRecord, FlowConfig, FlowEvent, Resistance};
use crate::real::{Point, Real};
use crate::uniformization::{ElResidualReport, EnergyFunctional};

fn pair<T: Real>(p: Point<T>) -> [f64; 2] {
    [p.x.to_f64_lossy(), p.y.to_f64_lossy()]
}

fn point<T: Real>(p: [f64; 2]) -> Point<T> {
    Point::new(T::lit(p[0]), T::lit(p[1]))
}

/// `{"points": [[x, y], ...], "length": L}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveJson {
    pub points: Vec<[f64; 2]>,
    pub length: f64,
}

impl CurveJson {
    pub fn from_curve<T: Real>(c: &ClosedCurve<T>) -> Self {
        Self { points: c.points().iter().map(|p| pair(*p)).collect(), length: c.length().to_f64_lossy() }
    }

    /// Rebuilds the curve; the stated length must match the polygon.
    pub fn to_curve<T: Real>(&self) -> Result<ClosedCurve<T>> {
        let c: ClosedCurve<T> = ClosedCurve::new(self.points.iter().map(|p| point(*p)).collect())?;
        let l: f64 = c.length().to_f64_lossy();
        if (l - self.length).abs() > 1e-6 * l.max(1.0) {
            return Err(Error::Invalid(format!("stated length {} differs from polygon length {l}", self.length)));
        }
        Ok(c)
    }
}

/// `{"alpha": [...], "base": [x, y]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussJson {
    pub alpha: Vec<f64>,
    pub base: [f64; 2],
}

impl GaussJson {
    pub fn from_gauss<T: Real>(g: &GaussRep<T>) -> Self {
        Self { alpha: g.alpha().iter().map(|a| a.to_f64_lossy()).collect(), base: pair(g.base()) }
    }

    pub fn to_gauss<T: Real>(&self) -> Result<GaussRep<T>> {
        GaussRep::new(self.alpha.iter().map(|a| T::lit(*a)).collect(), point(self.base))
    }
}

/// One crossing: position and the curve segments of the over and under
/// strands.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingJson {
    pub pos: [f64; 2],
    pub over: usize,
    pub under: usize,
}

/// `{"curve": ..., "crossings": [...]}`. Without `crossings` the types
/// alternate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub curve: CurveJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crossings: Option<Vec<CrossingJson>>,
}

impl DiagramJson {
    pub fn from_diagram<T: Real>(d: &KnotDiagram<T>) -> Self {
        let crossings = d
            .crossing_specs()
            .into_iter()
            .map(|s| CrossingJson { pos: pair(s.position), over: s.over_segment, under: s.under_segment })
            .collect();
        Self { curve: CurveJson::from_curve(d.curve()), crossings: Some(crossings) }
    }

    pub fn to_diagram<T: Real>(&self) -> Result<KnotDiagram<T>> {
        let curve = self.curve.to_curve()?;
        let rule = match &self.crossings {
            None => CrossingRule::Alternating,
            Some(cs) => CrossingRule::Explicit(
                cs.iter()
                    .map(|c| CrossingSpec { position: point(c.pos), over_segment: c.over, under_segment: c.under })
                    .collect(),
            ),
        };
        detect_crossings(&curve, &rule)
    }
}

/// Reads either a diagram or a bare curve (whose crossings then alternate).
pub fn parse_diagram<T: Real>(text: &str) -> Result<KnotDiagram<T>> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Invalid(e.to_string()))?;
    let doc: DiagramJson = if value.get("curve").is_some() {
        serde_json::from_value(value)
    } else {
        serde_json::from_value(value).map(|curve| DiagramJson { curve, crossings: None })
    }
    .map_err(|e| Error::Invalid(e.to_string()))?;
    doc.to_diagram()
}

/// `{"counts_by_arcs": {...}, "alternated": k, "total": m}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusJson {
    pub counts_by_arcs: BTreeMap<usize, u64>,
    /// Absent for plain graphs, which carry no crossing types.
    pub alternated: Option<u64>,
    pub total: u64,
}

impl CensusJson {
    pub fn of_cycles<T>(cycles: &[DiagramCycle<T>]) -> Self {
        let mut counts = BTreeMap::new();
        for c in cycles {
            *counts.entry(c.arc_count()).or_insert(0) += 1;
        }
        Self {
            counts_by_arcs: counts,
            alternated: Some(cycles.iter().filter(|c| c.alternated).count() as u64),
            total: cycles.len() as u64,
        }
    }

    pub fn of_total(total: u64) -> Self {
        Self { counts_by_arcs: BTreeMap::new(), alternated: None, total }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleJson {
    pub id: usize,
    pub arcs: usize,
    pub area: f64,
    pub alternated: bool,
    pub contribution: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BreakdownJson {
    pub family: Family,
    pub delta: Option<f64>,
    pub total: f64,
    pub per_cycle: Vec<CycleJson>,
}

impl BreakdownJson {
    pub fn from_breakdown<T: Real>(b: &EnergyBreakdown<T>) -> Self {
        Self {
            family: b.family,
            delta: b.delta.map(|d| d.to_f64_lossy()),
            total: b.total.to_f64_lossy(),
            per_cycle: b
                .per_cycle
                .iter()
                .map(|c| CycleJson {
                    id: c.id,
                    arcs: c.arcs,
                    area: c.area.to_f64_lossy(),
                    alternated: c.alternated,
                    contribution: c.contribution.to_f64_lossy(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElJson {
    pub c1: f64,
    pub c2: f64,
    pub rms: f64,
}

impl ElJson {
    pub fn from_report<T: Real>(r: &ElResidualReport<T>) -> Self {
        Self { c1: r.c1.to_f64_lossy(), c2: r.c2.to_f64_lossy(), rms: r.rms_residual.to_f64_lossy() }
    }
}

/// `{"functional": name, "value": v, "gradient_norm": n, "el": {...}}`, with
/// the resistance breakdown when one was asked for.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyReportJson {
    pub functional: String,
    pub value: f64,
    pub gradient_norm: f64,
    pub el: ElJson,
    pub whitney: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resistance: Option<BreakdownJson>,
}

/// One line of a trace file: an iterate or an event.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TraceLine {
    Record {
        iter: usize,
        #[serde(rename = "U")]
        u: f64,
        #[serde(rename = "R")]
        r: f64,
        gmre: Option<f64>,
        crossings: usize,
        grad_norm: f64,
    },
    Event {
        event: crate::flow::EventKind,
        iter: usize,
        location: [f64; 2],
        crossing_delta: i64,
    },
}

impl TraceLine {
    pub fn record<T: Real>(e: &EnergyRecord<T>) -> Self {
        Self::Record {
            iter: e.iter,
            u: e.u.to_f64_lossy(),
            r: e.r.to_f64_lossy(),
            gmre: e.gmre.map(|g| g.to_f64_lossy()),
            crossings: e.crossings,
            grad_norm: e.grad_norm.to_f64_lossy(),
        }
    }

    pub fn event<T: Real>(e: &FlowEvent<T>) -> Self {
        Self::Event { event: e.kind, iter: e.iter, location: pair(e.location), crossing_delta: e.crossing_delta }
    }
}

/// Flow configuration file; every field is optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowConfigJson {
    pub functional: String,
    pub resistance: Resistance,
    pub delta: f64,
    pub step0: f64,
    pub max_iters: usize,
    pub grad_tol: f64,
    pub gmre_ceiling: f64,
    pub fd_step: f64,
    pub smoothing: f64,
}

impl Default for FlowConfigJson {
    fn default() -> Self {
        let d = FlowConfig::<f64>::default();
        Self {
            functional: d.functional.name().to_string(),
            resistance: d.resistance,
            delta: d.delta,
            step0: d.step0,
            max_iters: d.max_iters,
            grad_tol: d.grad_tol,
            gmre_ceiling: d.gmre_ceiling,
            fd_step: d.fd_step,
            smoothing: d.smoothing,
        }
    }
}

impl FlowConfigJson {
    pub fn to_config<T: Real>(&self) -> Result<FlowConfig<T>> {
        let cfg = FlowConfig {
            functional: EnergyFunctional::by_name(&self.functional)?,
            resistance: self.resistance,
            delta: T::lit(self.delta),
            step0: T::lit(self.step0),
            max_iters: self.max_iters,
            grad_tol: T::lit(self.grad_tol),
            gmre_ceiling: T::lit(self.gmre_ceiling),
            fd_step: T::lit(self.fd_step),
            smoothing: T::lit(self.smoothing),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn curve_round_trip() {
        let c = fixtures::trefoil::<f64>(128);
        let text = serde_json::to_string(&CurveJson::from_curve(&c)).unwrap();
        let back: CurveJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_curve::<f64>().unwrap(), c);
    }

    #[test]
    fn wrong_length_is_rejected() {
        let mut j = CurveJson::from_curve(&fixtures::circle::<f64>(64));
        j.length *= 2.0;
        assert!(j.to_curve::<f64>().is_err());
    }

    #[test]
    fn diagram_round_trip_keeps_types() {
        let c = fixtures::trefoil::<f64>(256);
        let d = detect_crossings(&c, &CrossingRule::FirstOver).unwrap();
        let text = serde_json::to_string(&DiagramJson::from_diagram(&d)).unwrap();
        let back: KnotDiagram<f64> = parse_diagram(&text).unwrap();
        assert_eq!(back.first_over_flags(), d.first_over_flags());
    }

    #[test]
    fn bare_curve_reads_as_alternating_diagram() {
        let c = fixtures::trefoil::<f64>(256);
        let text = serde_json::to_string(&CurveJson::from_curve(&c)).unwrap();
        let d: KnotDiagram<f64> = parse_diagram(&text).unwrap();
        let alt = detect_crossings(&c, &CrossingRule::Alternating).unwrap();
        assert_eq!(d.first_over_flags(), alt.first_over_flags());
    }

    #[test]
    fn census_keys_are_arc_counts() {
        let d = fixtures::trefoil_diagram::<f64>(256);
        let cycles = crate::diagram::enumerate_cycles(&d, None, None).unwrap();
        let v = serde_json::to_value(CensusJson::of_cycles(&cycles)).unwrap();
        assert_eq!(v, serde_json::json!({"counts_by_arcs": {"1": 6, "2": 3, "3": 2}, "alternated": 11, "total": 11}));
    }

    #[test]
    fn trace_lines_have_the_documented_keys() {
        let line = TraceLine::Record { iter: 3, u: 1.0, r: 0.5, gmre: Some(0.25), crossings: 2, grad_norm: 1e-3 };
        let v = serde_json::to_value(&line).unwrap();
        for k in ["iter", "U", "R", "gmre", "crossings"] {
            assert!(v.get(k).is_some(), "missing {k}");
        }
        let back: TraceLine = serde_json::from_value(v).unwrap();
        assert_eq!(back, line);
    }

    #[test]
    fn config_defaults_and_overrides() {
        let j: FlowConfigJson = serde_json::from_str(r#"{"resistance": "RE", "delta": 0.2}"#).unwrap();
        let cfg = j.to_config::<f64>().unwrap();
        assert_eq!(cfg.resistance, Resistance::RE);
        assert_eq!(cfg.delta, 0.2);
        assert_eq!(cfg.max_iters, FlowConfig::<f64>::default().max_iters);
        assert!(serde_json::from_str::<FlowConfigJson>(r#"{"nope": 1}"#).is_err());
    }
}
