use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use flatknot::acceptance::{self, Group};
use flatknot::curve::{closure_report, gauss_from_curve, whitney_index};
use flatknot::diagram::lattice::{grid_cycle_count, lattice_graph};
use flatknot::diagram::{enumerate_cycles, enumerate_cycles_with, gmre, mre, resistance_energy, CycleOptions, Family, KnotDiagram};
use flatknot::flow::{relax_with, Termination, TraceItem};
use flatknot::io::{
    parse_diagram, BreakdownJson, CensusJson, CurveJson, DiagramJson, ElJson, EnergyReportJson, FlowConfigJson, TraceLine,
};
use flatknot::pendulum::{build_infinity_curve, find_critical_xi, pendulum_alpha, PendulumParams};
use flatknot::render::{curve_svg, diagram_svg, RenderSpec};
use flatknot::uniformization::{el_residual, energy_uf, l2_norm, uf_gradient, EnergyFunctional};
use flatknot::Error;

use crate::{code, Failure};

fn read_diagram(path: &Path) -> Result<KnotDiagram<f64>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok(parse_diagram(&text)?)
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), Failure> {
    let mut text = serde_json::to_string(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn pendulum(r: i64, n: usize, out: Option<&Path>) -> Result<u8, Failure> {
    if r != 0 && r % 2 != 0 {
        return Err(Failure::usage(format!(
            "r = {r} is odd: the sine integral of the pendulum angle does not vanish for odd r, so the curve cannot close"
        )));
    }
    let xi = find_critical_xi::<f64>(r)?;
    println!("xi = {xi:.12}");
    let g = pendulum_alpha(&PendulumParams::new(xi, r)?, n)?;
    let report = closure_report(&g);
    println!("cos integral = {:.3e}", report.cos_integral);
    println!("sin integral = {:.3e}", report.sin_integral);
    println!("angle defect mod 2pi = {:.3e}", report.angle_defect_mod_2pi);
    println!("whitney index = {}", report.whitney);
    if let Some(dir) = out {
        let c = build_infinity_curve::<f64>(r, n)?;
        fs::create_dir_all(dir)?;
        write_json(&dir.join("curve.json"), &CurveJson::from_curve(&c))?;
        fs::write(dir.join("curve.svg"), curve_svg(&c, &RenderSpec::default())?)?;
    }
    Ok(code::OK)
}

pub fn energy(input: &Path, family: Option<Family>, delta: f64, functional: &str) -> Result<u8, Failure> {
    let d = read_diagram(input)?;
    let e = EnergyFunctional::<f64>::by_name(functional)?;
    let g = gauss_from_curve(d.curve());
    let resistance = match family {
        None => None,
        Some(Family::RE) => Some(resistance_energy(&d)?),
        Some(Family::MRE) => Some(mre(&d, delta)?),
        Some(Family::GMRE) => Some(gmre(&d, delta)?),
    };
    let report = EnergyReportJson {
        functional: e.name().to_string(),
        value: energy_uf(&g, &e),
        gradient_norm: l2_norm(&uf_gradient(&g, &e), g.step()),
        el: ElJson::from_report(&el_residual(&g, &e)),
        whitney: whitney_index(d.curve())?,
        resistance: resistance.as_ref().map(BreakdownJson::from_breakdown),
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(code::OK)
}

fn explosion(e: Error) -> Failure {
    if let Error::CycleExplosion { partial, .. } = e {
        // the partial count still goes to stdout for scripts
        if let Ok(text) = serde_json::to_string(&CensusJson::of_total(partial)) {
            println!("{text}");
        }
    }
    Failure::from(e)
}

pub fn cycles(diagram: Option<&Path>, grid: Option<usize>, gstar: Option<usize>, limit: u64) -> Result<u8, Failure> {
    let opts = CycleOptions { limit, ..CycleOptions::default() };
    let census = if let Some(path) = diagram {
        let d = read_diagram(path)?;
        CensusJson::of_cycles(&enumerate_cycles_with(&d, &opts).map_err(explosion)?)
    } else if let Some(n) = grid {
        CensusJson::of_total(grid_cycle_count(n)?)
    } else if let Some(n) = gstar {
        if !(1..=4).contains(&n) {
            return Err(Failure::usage(format!("G*({n}) is outside the supported range 1..=4")));
        }
        CensusJson::of_cycles(&enumerate_cycles_with(&lattice_graph::<f64>(n, true), &opts).map_err(explosion)?)
    } else {
        return Err(Failure::usage("one of --diagram, --grid, --gstar is required"));
    };
    println!("{}", serde_json::to_string(&census)?);
    Ok(code::OK)
}

pub fn relax(input: &Path, config: Option<&Path>, out: &Path, keyframe_every: usize) -> Result<u8, Failure> {
    let d = read_diagram(input)?;
    let cfg_json: FlowConfigJson = match config {
        Some(p) => serde_json::from_str(&fs::read_to_string(p)?)?,
        None => FlowConfigJson::default(),
    };
    let cfg = cfg_json.to_config::<f64>()?;
    fs::create_dir_all(out)?;
    let mut trace_file = BufWriter::new(File::create(out.join("trace.jsonl"))?);
    let mut io_error = None;
    let mut keyframe_error = None;
    let trace = relax_with(&d, &cfg, |item| {
        let line = match item {
            TraceItem::Record(rec, diagram) => {
                if keyframe_every > 0 && rec.iter % keyframe_every == 0 && keyframe_error.is_none() {
                    let path = out.join(format!("frame_{:05}.svg", rec.iter));
                    let res = diagram_svg(diagram, &[], &RenderSpec::default())
                        .map_err(Failure::from)
                        .and_then(|svg| fs::write(path, svg).map_err(Failure::from));
                    keyframe_error = res.err();
                }
                TraceLine::record(rec)
            }
            TraceItem::Event(ev) => TraceLine::event(ev),
        };
        if io_error.is_none() {
            let res = serde_json::to_string(&line).map(|s| writeln!(trace_file, "{s}"));
            match res {
                Ok(Ok(())) => {}
                Ok(Err(e)) => io_error = Some(Failure::from(e)),
                Err(e) => io_error = Some(Failure::from(e)),
            }
        }
    })?;
    trace_file.flush()?;
    if let Some(f) = io_error.or(keyframe_error) {
        return Err(f);
    }
    write_json(&out.join("final_curve.json"), &CurveJson::from_curve(&trace.final_curve))?;
    write_json(&out.join("final_diagram.json"), &DiagramJson::from_diagram(&trace.final_diagram))?;
    fs::write(out.join("final.svg"), diagram_svg(&trace.final_diagram, &[], &RenderSpec::default())?)?;
    let last = trace.energies.last();
    println!(
        "terminated: {:?} after {} iterations, U = {:.9}, R = {:.6}, crossings = {}, events = {}",
        trace.terminated,
        last.map_or(0, |e| e.iter),
        last.map_or(f64::NAN, |e| e.u),
        last.map_or(f64::NAN, |e| e.r),
        trace.final_diagram.crossing_count(),
        trace.events.len()
    );
    Ok(match trace.terminated {
        Termination::ForbiddenEvent => {
            eprintln!("flatknot: forbidden event: {:?}", trace.events.last());
            code::FORBIDDEN
        }
        Termination::Singular => {
            eprintln!("flatknot: an alternated cycle collapsed");
            code::SINGULAR
        }
        _ => code::OK,
    })
}

pub fn render(input: &Path, out: &Path, spec: &RenderSpec) -> Result<u8, Failure> {
    let d = read_diagram(input)?;
    let cycles = if spec.show_cycles.is_some() { enumerate_cycles(&d, None, None)? } else { Vec::new() };
    fs::write(out, diagram_svg(&d, &cycles, spec)?)?;
    Ok(code::OK)
}

pub fn verify(only: &[String]) -> Result<u8, Failure> {
    let mut groups = Vec::new();
    let mut ids = Vec::new();
    for s in only {
        if let Some(g) = Group::parse(s) {
            groups.push(g);
        } else if let Ok(id) = s.parse::<u8>() {
            if !(1..=13).contains(&id) {
                return Err(Failure::usage(format!("no criterion {id}")));
            }
            ids.push(id);
        } else {
            return Err(Failure::usage(format!("unknown criterion or group '{s}'")));
        }
    }
    let outcomes = acceptance::run(|c| only.is_empty() || groups.contains(&c.group) || ids.contains(&c.id));
    for o in &outcomes {
        println!("{o}");
    }
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| format!("{} ({})", o.id, o.name)).collect();
    println!("{}/{} passed", outcomes.len() - failed.len(), outcomes.len());
    if failed.is_empty() {
        Ok(code::OK)
    } else {
        eprintln!("flatknot: failed criteria: {}", failed.join(", "));
        Ok(code::VERIFY_FAILED)
    }
}
