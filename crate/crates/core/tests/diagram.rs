use flatknot::diagram::{
    enumerate_cycles, gmre, gmre_with, mre, resistance_energy, GmreVariant, KnotDiagram,
};
use flatknot::fixtures;
use flatknot::Point;
use proptest::prelude::*;

fn diagram(seed: u64) -> KnotDiagram<f64> {
    fixtures::random_diagram(256, 1, 5, seed)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn one_arc_cycles_are_alternated(seed in 0u64..10_000) {
        let d = diagram(seed);
        let cycles = enumerate_cycles(&d, None, None).unwrap();
        prop_assert!(!cycles.is_empty());
        for c in &cycles {
            if c.arc_count() <= 1 {
                prop_assert!(c.alternated);
            }
            prop_assert!(c.area > 0.0);
        }
        let mut keys: Vec<_> = cycles.iter().map(|c| c.canonical.clone()).collect();
        keys.sort();
        keys.dedup();
        prop_assert_eq!(keys.len(), cycles.len());
    }

    #[test]
    fn energies_are_invariant_under_rigid_motion(
        seed in 0u64..10_000,
        theta in -3.0f64..3.0,
        dx in -4.0f64..4.0,
        dy in -4.0f64..4.0,
    ) {
        let d = diagram(seed);
        let moved = d.transformed(1.0, theta, Point::new(dx, dy)).unwrap();
        prop_assert!(close(resistance_energy(&d).unwrap().total, resistance_energy(&moved).unwrap().total));
        prop_assert!(close(mre(&d, 0.3).unwrap().total, mre(&moved, 0.3).unwrap().total));
        prop_assert!(close(gmre(&d, 0.3).unwrap().total, gmre(&moved, 0.3).unwrap().total));
    }

    #[test]
    fn mre_scaling_law(seed in 0u64..10_000, s in 0.3f64..3.0, delta in 0.05f64..1.0) {
        let d = diagram(seed);
        let ds = d.transformed(s, 0.0, Point::zero()).unwrap();
        let lhs = mre(&ds, delta).unwrap().total;
        let rhs = mre(&d, delta / (s * s)).unwrap().total / (s * s);
        prop_assert!(close(lhs, rhs), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn family_ordering(seed in 0u64..10_000, delta in 0.05f64..1.0) {
        let d = diagram(seed);
        let re = resistance_energy(&d).unwrap().total;
        let m = mre(&d, delta).unwrap().total;
        let g = gmre(&d, delta).unwrap();
        let strict = gmre_with(&d, delta, GmreVariant { alternated_four: true }).unwrap().total;
        let short: f64 = g.per_cycle.iter().filter(|c| c.arcs <= 3).map(|c| c.contribution).sum();
        prop_assert!(m <= re + 1e-12);
        prop_assert!(short <= m + 1e-12);
        prop_assert!(strict <= m + 1e-12);
        prop_assert!(strict <= g.total + 1e-12);
        prop_assert!(m <= mre(&d, 2.0 * delta).unwrap().total + 1e-12);
    }
}
