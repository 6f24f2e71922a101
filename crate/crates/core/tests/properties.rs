mod common;

use cir::belief::{schedule_ect, stationary_ect, CopSchedule};
use cir::bounds::{consistent, family_values};
use cir::closed_form::{broom_f, broom_f_expanded, tree_bounds};
use cir::game::{CopConfig, Rules};
use cir::graph::{Family, Graph};
use cir::harness::{broom_scan, Format, Table};
use cir::play::{monte_carlo, McConfig};
use cir::strategies::{DrunkRobber, StationaryCop};
use cir::symmetry::Symmetry;
use cir::weight::{fmt_rational, snap_rational, Rational};
use common::q;
use proptest::prelude::*;

/// A random connected graph: a random tree on `n` vertices plus a few extra edges.
fn connected_graph() -> impl Strategy<Value = Graph> {
    (2usize..9)
        .prop_flat_map(|n| {
            let parents: Vec<_> = (1..n).map(|v| 0..v).collect();
            (Just(n), parents, prop::collection::vec((0..n, 0..n), 0..4))
        })
        .prop_map(|(n, parents, extra)| {
            let mut edges: Vec<(usize, usize)> = parents.into_iter().enumerate().map(|(i, p)| (p, i + 1)).collect();
            for (u, v) in extra {
                let e = (u.min(v), u.max(v));
                if u != v && !edges.iter().any(|&(a, b)| (a.min(b), a.max(b)) == e) {
                    edges.push(e);
                }
            }
            Graph::from_edges(n, &edges).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn broom_polynomial_matches_expansion(c in 0.01f64..1.0, bf in 0.0f64..=1.0, p in 0.0f64..=1.0, x in 0.0f64..=1.0) {
        let b = bf * c;
        let f = broom_f(c, b, p, x);
        prop_assert!((f.a2 * x * x + f.a1 * x + f.a0 - f.value).abs() < 1e-12);
        prop_assert!((f.value - broom_f_expanded(c, b, p, x)).abs() < 1e-9);
        prop_assert!((f.a2 + f.a1 + f.a0 - 1.0).abs() < 1e-12);
        prop_assert!(f.a2 <= 1e-12);
        // concave in x, so the minimum over [0, 1] sits at an endpoint and is at least 1
        prop_assert!(f.value >= 1.0 - 1e-12);
    }

    #[test]
    fn broom_scan_never_beats_one(c in 0.05f64..1.0, steps in 2usize..9) {
        let s = broom_scan(c, steps).unwrap();
        prop_assert!(s.f_min >= 1.0 - 1e-12);
        prop_assert!((s.f_min - broom_f(c, s.b, s.p, s.x).value).abs() < 1e-12);
    }

    #[test]
    fn catalog_is_consistent(leaves in 1usize..40, n in 3usize..60, d in 2usize..5, depth in 1usize..6, side in 2usize..20, c in 0.05f64..1.0) {
        for f in [
            Family::Star { leaves },
            Family::Path { n },
            Family::Cycle { n },
            Family::Tree { d, depth },
            Family::Grid { side },
            Family::Broom { c, n: 40 * n },
        ] {
            let recs = family_values(&f);
            prop_assert!(!recs.is_empty());
            prop_assert!(consistent(&recs), "{f:?}");
        }
    }

    #[test]
    fn tree_lower_bound_below_upper(d in 2usize..7, depth in 1usize..9) {
        let t = tree_bounds(d, depth).unwrap();
        prop_assert!(t.evader_lower <= t.round_upper);
    }

    #[test]
    fn edge_list_round_trip(g in connected_graph()) {
        let back = Graph::parse_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn automorphisms_preserve_edges_and_canonical_form(g in connected_graph(), v in 0usize..8) {
        let sym = Symmetry::of_graph(&g, 5000);
        for i in 0..sym.len() {
            let p = sym.perm(i);
            for (a, b) in g.edges() {
                prop_assert!(g.has_edge(p[a], p[b]));
            }
        }
        let cfg = CopConfig::single(v % g.n());
        let canon = sym.canonical_config(&cfg);
        prop_assert_eq!(sym.canonical_config(&canon), canon.clone());
        for i in 0..sym.len() {
            prop_assert_eq!(sym.canonical_config(&sym.apply(i, &cfg)), canon.clone());
        }
    }

    #[test]
    fn schedule_law_is_a_distribution(g in connected_graph(), seed in 0u64..1000) {
        let mut rng = cir::play::trial_rng(seed, 0);
        let sched = cir::drunk::random_schedule(&g, 1, 6, &mut rng).unwrap();
        let d = schedule_ect::<Rational>(&g, &sched, 1).unwrap();
        prop_assert_eq!(d.total_mass(), q(1, 1));
        prop_assert!(d.masses.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn extra_stationary_cop_never_hurts(g in connected_graph(), a in 0usize..8, b in 0usize..8) {
        let (a, b) = (a % g.n(), b % g.n());
        let one = stationary_ect::<Rational>(&g, &CopConfig::single(a), 1).unwrap();
        let two = stationary_ect::<Rational>(&g, &CopConfig::new(vec![a, b]), 1).unwrap();
        prop_assert!(two <= one);
    }

    #[test]
    fn rational_snapping_recovers_small_fractions(num in -50i64..50, den in 1i64..60) {
        let r = Rational::new(num.into(), den.into());
        let x = num as f64 / den as f64;
        prop_assert_eq!(snap_rational(x, 100, 1e-12).map(|s| fmt_rational(&s)), Some(fmt_rational(&r)));
    }
}

#[test]
fn monte_carlo_is_reproducible() {
    let g = Graph::from_spec("grid:4").unwrap();
    let cop = StationaryCop::new(&g, CopConfig::new(vec![3, 12])).unwrap();
    let run = |seed| monte_carlo(&g, &cop, &DrunkRobber::new(1), Rules::default(), McConfig::new(3000, seed)).unwrap();
    let a = run(9);
    assert_eq!(a, run(9));
    assert_ne!(a.histogram, run(10).histogram);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    assert_eq!(a, pool.install(|| run(9)));
}

#[test]
fn tables_render_in_both_formats() {
    let mut t = Table::new(&["graph", "value", "note"]);
    t.push(&[("graph", "star:2".into()), ("value", "1.5".into())]);
    t.push(&[("graph", "path:3".into()), ("value", "2".into()), ("note", "a,b".into())]);
    let csv = t.render(Format::Csv).unwrap();
    assert_eq!(csv, "graph,value,note\nstar:2,1.5,\npath:3,2,\"a,b\"\n");
    let json: serde_json::Value = serde_json::from_str(&t.render(Format::Json).unwrap()).unwrap();
    assert_eq!(json[0]["value"], serde_json::json!(1.5));
    assert_eq!(json[1]["value"], serde_json::json!(2));
    assert_eq!(json[1]["note"], serde_json::json!("a,b"));
}

#[test]
fn schedule_from_vertices_checks_moves() {
    let g = Graph::from_spec("path:4").unwrap();
    assert!(CopSchedule::single(&g, &[0, 2]).is_err());
    assert!(CopSchedule::single(&g, &[0, 0, 1]).is_ok());
}
