use std::f64::consts::TAU;

use flatknot::curve::{aligned_hausdorff, gauss_from_curve, whitney_index, ClosedCurve};
use flatknot::diagram::{detect_crossings, enumerate_cycles, CrossingRule};
use flatknot::fixtures;
use flatknot::flow::*;
use flatknot::pendulum::build_infinity_curve;
use flatknot::uniformization::discrete_curvature;

fn config(resistance: Resistance, delta: f64, max_iters: usize) -> FlowConfig<f64> {
    FlowConfig { resistance, delta, max_iters, ..FlowConfig::default() }
}

fn check_trace(trace: &FlowTrace<f64>) {
    for w in trace.energies.windows(2) {
        assert!(w[1].total <= w[0].total + 1e-12, "energy rose at iter {}", w[1].iter);
    }
    for e in &trace.energies {
        assert!((e.total - (e.u + e.r)).abs() <= 1e-8 * e.total.abs().max(1.0));
    }
    assert!((trace.final_curve.length() - TAU).abs() < 1e-8);
}

#[test]
fn second_move_is_classified_both_ways() {
    let before = fixtures::bigon_diagram::<f64>(512, 0.3);
    let after = fixtures::bigon_diagram::<f64>(512, -0.3);
    assert_eq!(before.crossing_count(), 2);
    assert_eq!(after.crossing_count(), 0);
    let ev = classify_event(&before, &after).unwrap();
    assert_eq!(ev.kind, EventKind::R2Vanish);
    assert_eq!(ev.crossing_delta, -2);
    assert!(ev.location.norm() < 0.1);
    let ev = classify_event(&after, &before).unwrap();
    assert_eq!(ev.kind, EventKind::R2Appear);
    assert_eq!(ev.crossing_delta, 2);
}

#[test]
fn clasped_bigon_cannot_vanish() {
    let before = fixtures::bigon_diagram::<f64>(512, 0.3);
    let clasped = detect_crossings(before.curve(), &CrossingRule::Alternating).unwrap();
    let after = fixtures::bigon_diagram::<f64>(512, -0.3);
    assert_eq!(classify_event(&clasped, &after).unwrap().kind, EventKind::Forbidden);
}

#[test]
fn third_move_is_classified() {
    let before = fixtures::triangle_diagram::<f64>(512, 0.7);
    let after = fixtures::triangle_diagram::<f64>(512, 1.3);
    assert_eq!(before.crossing_count(), 4);
    let ev = classify_event(&before, &after).unwrap();
    assert_eq!(ev.kind, EventKind::R3);
    assert_eq!(ev.crossing_delta, 0);
    assert_eq!(classify_event(&after, &before).unwrap().kind, EventKind::R3);
}

#[test]
fn cyclic_triangle_is_forbidden() {
    // horizontal over the first slanted strand, under the second, and the
    // slanted strands stacked the other way round
    let typed = |c| {
        let d = fixtures::triangle_diagram::<f64>(512, c);
        detect_crossings(d.curve(), &CrossingRule::PerCrossing(vec![true, false, true, true])).unwrap()
    };
    assert_eq!(classify_event(&typed(0.7), &typed(1.3)).unwrap().kind, EventKind::Forbidden);
}

#[test]
fn loop_removal_is_forbidden() {
    let before = fixtures::limacon_diagram::<f64>(256, 0.8);
    let after = fixtures::limacon_diagram::<f64>(256, 1.2);
    let ev = classify_event(&before, &after).unwrap();
    assert_eq!(ev.kind, EventKind::Forbidden);
    assert_eq!(ev.crossing_delta, -1);
}

#[test]
fn unchanged_diagram_has_no_event() {
    let d = fixtures::trefoil_diagram::<f64>(256);
    assert!(classify_event(&d, &d).is_none());
}

#[test]
fn round_circle_energy() {
    let (u, r) = total_energy(&fixtures::circle::<f64>(512), &config(Resistance::MRE, 0.05, 0)).unwrap();
    assert!((u - TAU).abs() < 1e-6);
    assert_eq!(r, 0.0);
}

#[test]
fn infinity_curve_lobes_are_symmetric() {
    let c = build_infinity_curve::<f64>(2, 512).unwrap();
    let (_, r) = total_energy(&c, &config(Resistance::RE, 0.05, 0)).unwrap();
    let d = detect_crossings(&c, &CrossingRule::Alternating).unwrap();
    let cycles = enumerate_cycles(&d, None, None).unwrap();
    assert_eq!(cycles.len(), 2);
    assert!((cycles[0].area - cycles[1].area).abs() < 1e-6);
    assert!((r - 2.0 / cycles[0].area).abs() < 1e-6 * r);
}

#[test]
fn energies_scale() {
    let c = fixtures::trefoil::<f64>(256);
    let cfg = config(Resistance::RE, 0.05, 0);
    let (u, r) = total_energy(&c, &cfg).unwrap();
    let s = 1.7;
    let (us, rs) = total_energy(&c.scaled(s), &cfg).unwrap();
    assert!((us - u / s).abs() < 1e-9 * u);
    assert!((rs - r / (s * s)).abs() < 1e-9 * r);
}

#[test]
fn one_step_descends_on_noisy_circle() {
    let c = fixtures::noisy_circle::<f64>(256, 0.05, 1);
    let cfg = config(Resistance::MRE, 0.05, 0);
    let (u0, r0) = total_energy(&c, &cfg).unwrap();
    let (next, tau) = flow_step(&c, &cfg, 0.1).unwrap();
    let (u1, r1) = total_energy(&next, &cfg).unwrap();
    assert!(tau > 0.0);
    assert!(u1 + r1 < u0 + r0);
    assert!((next.length() - TAU).abs() < 1e-8);
}

#[test]
fn round_circle_does_not_move() {
    let c = fixtures::circle::<f64>(256);
    let cfg = config(Resistance::MRE, 0.05, 0);
    let (next, _) = flow_step(&c, &cfg, 0.1).unwrap();
    let worst = c.points().iter().zip(next.points()).map(|(p, q)| p.dist(*q)).fold(0.0, f64::max);
    assert!(worst < 1e-8, "moved by {worst}");
}

#[test]
fn noisy_circle_relaxes_to_round() {
    let c = fixtures::noisy_circle::<f64>(256, 0.05, 1);
    let trace = relax(&c, &config(Resistance::MRE, 0.05, 500)).unwrap();
    assert_eq!(trace.terminated, Termination::Converged);
    check_trace(&trace);
    let k = discrete_curvature(&gauss_from_curve(&trace.final_curve));
    let spread = k.iter().cloned().fold(f64::MIN, f64::max) - k.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread < 1e-3, "curvature spread {spread}");
    assert_eq!(trace.final_diagram.crossing_count(), 0);
}

#[test]
fn noisy_figure_eight_relaxes_to_infinity_curve() {
    let c = fixtures::noisy_figure_eight::<f64>(256, 0.05, 1);
    let trace = relax(&c, &config(Resistance::None, 0.05, 500)).unwrap();
    assert_eq!(trace.terminated, Termination::Converged);
    check_trace(&trace);
    let first = trace.energies.first().unwrap().grad_norm;
    let last = trace.energies.last().unwrap().grad_norm;
    assert!(last * 10.0 <= first);
    let target = build_infinity_curve::<f64>(2, 256).unwrap().rescaled_to_length(TAU);
    let h = aligned_hausdorff(&trace.final_curve, &target);
    assert!(h < 1e-2, "Hausdorff distance {h}");
    assert_eq!(whitney_index(&trace.final_curve).unwrap(), 0);
}

#[test]
fn trefoil_keeps_a_small_alternated_cycle() {
    let delta = 0.3;
    let trace = relax(&fixtures::trefoil::<f64>(256), &config(Resistance::MRE, delta, 400)).unwrap();
    assert!(!trace.has_forbidden_event());
    check_trace(&trace);
    assert_eq!(trace.final_diagram.crossing_count(), 3);
    let cycles = enumerate_cycles(&trace.final_diagram, None, None).unwrap();
    assert!(cycles.iter().any(|c| c.alternated && c.area < delta));
}

#[test]
fn whitney_index_is_constant_along_traces() {
    let trace = relax(&fixtures::trefoil::<f64>(256), &config(Resistance::MRE, 0.3, 40)).unwrap();
    assert!(trace.energies.iter().all(|e| e.whitney == Some(2)));
}

#[test]
fn bounded_gmre_means_no_forbidden_event() {
    for seed in 0..4 {
        let d = fixtures::random_diagram::<f64>(256, 2, 6, 900 + seed);
        let cfg = config(Resistance::MRE, 0.3, 60);
        let trace = relax_diagram(&d, &cfg).unwrap();
        check_trace(&trace);
        if trace.max_gmre().is_some_and(|g| g <= cfg.gmre_ceiling) {
            assert!(!trace.has_forbidden_event(), "seed {seed}: {:?}", trace.events);
        }
    }
}

#[test]
fn clasp_passes_through_itself_without_resistance() {
    let c = fixtures::clasp::<f64>(256);
    assert_eq!(whitney_index(&c).unwrap(), 1);
    let trace = relax(&c, &config(Resistance::None, 0.3, 200)).unwrap();
    assert_eq!(trace.terminated, Termination::ForbiddenEvent);
    assert!(trace.has_forbidden_event());
}

#[test]
fn resistance_holds_the_clasp() {
    let c = fixtures::clasp::<f64>(256);
    let trace = relax(&c, &config(Resistance::RE, 0.3, 60)).unwrap();
    assert!(!trace.has_forbidden_event());
    assert_eq!(trace.final_diagram.crossing_count(), 2);
    check_trace(&trace);
}

#[test]
fn invalid_config_is_rejected() {
    let c: ClosedCurve<f64> = fixtures::circle(64);
    let cfg = FlowConfig { step0: 0.0, ..FlowConfig::default() };
    assert!(relax(&c, &cfg).is_err());
}
