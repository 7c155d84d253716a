//! SVG drawings of curves and diagrams.

use std::fmt::Write;

use crate::curve::ClosedCurve;
use crate::diagram::{DiagramCycle, KnotDiagram};
use crate::error::{Error, Result};
use crate::real::{Point, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    pub width: u32,
    pub height: u32,
    pub stroke: f64,
    /// Break the under strand at each crossing.
    pub show_crossings: bool,
    /// Cycles to shade, by index into the list passed to the renderer;
    /// `None` shades none.
    pub show_cycles: Option<Vec<usize>>,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self { width: 480, height: 480, stroke: 2.0, show_crossings: true, show_cycles: None }
    }
}

impl RenderSpec {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 || !(self.stroke > 0.0) {
            return Err(Error::Invalid("render size and stroke must be positive".into()));
        }
        Ok(())
    }
}

const PALETTE: [&str; 6] = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1", "#76b7b2"];

/// Maps curve coordinates into the picture, keeping the aspect ratio.
struct Frame {
    scale: f64,
    ox: f64,
    oy: f64,
    height: f64,
}

impl Frame {
    fn fit(pts: &[[f64; 2]], spec: &RenderSpec) -> Self {
        let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for p in pts {
            x0 = x0.min(p[0]);
            x1 = x1.max(p[0]);
            y0 = y0.min(p[1]);
            y1 = y1.max(p[1]);
        }
        let (w, h) = (spec.width as f64, spec.height as f64);
        let margin = 0.05 * w.min(h) + 2.0 * spec.stroke;
        let span = ((x1 - x0) / (w - 2.0 * margin)).max((y1 - y0) / (h - 2.0 * margin));
        let scale = if span > 0.0 { 1.0 / span } else { 1.0 };
        let ox = (w - (x1 - x0) * scale) / 2.0 - x0 * scale;
        let oy = (h - (y1 - y0) * scale) / 2.0 - y0 * scale;
        Self { scale, ox, oy, height: h }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (p[0] * self.scale + self.ox, self.height - (p[1] * self.scale + self.oy))
    }

    fn path(&self, pts: &[[f64; 2]], closed: bool) -> String {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let (x, y) = self.map(*p);
            let _ = write!(d, "{}{x:.3},{y:.3}", if i == 0 { "M" } else { " L" });
        }
        if closed {
            d.push_str(" Z");
        }
        d
    }
}

fn to_pairs<T: Real>(pts: &[Point<T>]) -> Vec<[f64; 2]> {
    pts.iter().map(|p| [p.x.to_f64_lossy(), p.y.to_f64_lossy()]).collect()
}

fn header(spec: &RenderSpec) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        w = spec.width,
        h = spec.height
    )
}

/// SVG of a plain curve.
pub fn curve_svg<T: Real>(c: &ClosedCurve<T>, spec: &RenderSpec) -> Result<String> {
    spec.validate()?;
    let pts = to_pairs(c.points());
    let frame = Frame::fit(&pts, spec);
    let mut s = header(spec);
    let _ = writeln!(
        s,
        "<path d=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\" stroke-linejoin=\"round\"/>",
        frame.path(&pts, true),
        spec.stroke
    );
    s.push_str("</svg>\n");
    Ok(s)
}

/// Points of the curve within `half` samples of parameter `t`.
fn strand<T: Real>(c: &ClosedCurve<T>, t: f64, half: f64) -> Vec<[f64; 2]> {
    let n = c.len();
    let pts = c.points();
    let at = |s: f64| {
        let s = s.rem_euclid(n as f64);
        let i = s.floor() as usize % n;
        let f = s - s.floor();
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        [
            a.x.to_f64_lossy() + f * (b.x - a.x).to_f64_lossy(),
            a.y.to_f64_lossy() + f * (b.y - a.y).to_f64_lossy(),
        ]
    };
    let steps = 8;
    (0..=steps).map(|k| at(t - half + 2.0 * half * k as f64 / steps as f64)).collect()
}

/// SVG of a diagram with over/under gaps and optionally shaded cycles.
pub fn diagram_svg<T: Real>(d: &KnotDiagram<T>, cycles: &[DiagramCycle<T>], spec: &RenderSpec) -> Result<String> {
    spec.validate()?;
    let c = d.curve();
    let pts = to_pairs(c.points());
    let frame = Frame::fit(&pts, spec);
    let mut s = header(spec);
    if let Some(ids) = &spec.show_cycles {
        for (k, &id) in ids.iter().enumerate() {
            let cy = cycles
                .get(id)
                .ok_or_else(|| Error::Invalid(format!("no cycle {id} (have {})", cycles.len())))?;
            let _ = writeln!(
                s,
                "<path d=\"{}\" fill=\"{}\" fill-opacity=\"0.35\" stroke=\"none\"/>",
                frame.path(&to_pairs(&cy.polyline), true),
                PALETTE[k % PALETTE.len()]
            );
        }
    }
    let _ = writeln!(
        s,
        "<path d=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\" stroke-linejoin=\"round\"/>",
        frame.path(&pts, true),
        spec.stroke
    );
    if spec.show_crossings {
        // redraw a short piece of each over strand on a wide white band
        let gap_px = 4.0 * spec.stroke;
        let spacing = c.length().to_f64_lossy() / c.len() as f64 * frame.scale;
        let half = (2.0 * gap_px / spacing.max(1e-9)).max(0.5);
        for x in d.crossings() {
            let piece = strand(c, x.over_passage.param().to_f64_lossy(), half);
            let path = frame.path(&piece, false);
            let _ = writeln!(s, "<path d=\"{path}\" fill=\"none\" stroke=\"white\" stroke-width=\"{}\"/>", gap_px);
            let _ = writeln!(s, "<path d=\"{path}\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\"/>", spec.stroke);
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::enumerate_cycles;
    use crate::fixtures;
    use quick_xml::events::Event;
    use quick_xml::Reader;

    fn parse(svg: &str) -> (usize, String) {
        let mut r = Reader::from_str(svg);
        let mut paths = 0;
        let mut root = String::new();
        loop {
            match r.read_event().expect("well-formed XML") {
                Event::Eof => break,
                Event::Start(e) | Event::Empty(e) => {
                    let name = e.name().as_ref().to_string();
                    if root.is_empty() {
                        root = name.clone();
                    }
                    if name == "path" {
                        paths += 1;
                    }
                }
                _ => {}
            }
        }
        (paths, root)
    }

    #[test]
    fn curve_svg_is_xml() {
        let svg = curve_svg(&fixtures::figure_eight::<f64>(256), &RenderSpec::default()).unwrap();
        assert_eq!(parse(&svg), (1, "svg".to_string()));
    }

    #[test]
    fn diagram_svg_has_gaps_and_cycles() {
        let d = fixtures::trefoil_diagram::<f64>(256);
        let cycles = enumerate_cycles(&d, None, None).unwrap();
        let spec = RenderSpec { show_cycles: Some(vec![0, 1]), ..RenderSpec::default() };
        let svg = diagram_svg(&d, &cycles, &spec).unwrap();
        // two shaded cycles, the curve, two strokes per crossing
        assert_eq!(parse(&svg).0, 2 + 1 + 2 * 3);
    }

    #[test]
    fn bad_spec_is_rejected() {
        let d = fixtures::trefoil_diagram::<f64>(64);
        let spec = RenderSpec { width: 0, ..RenderSpec::default() };
        assert!(diagram_svg(&d, &[], &spec).is_err());
        let spec = RenderSpec { show_cycles: Some(vec![5]), ..RenderSpec::default() };
        assert!(diagram_svg(&d, &[], &spec).is_err());
    }
}
