//! Solver outputs against independent computations done in test code.

mod common;

use cir::adversarial::{build_game, solve_exact, solve_iterative, DEFAULT_NODE_CAP};
use cir::belief::{schedule_ect, stationary_ect, CopSchedule};
use cir::bounds::{grid_guess_chase_expression, guess_chase_upper};
use cir::closed_form::{star_infspeed_ect, tree_e, tree_e_deepest};
use cir::drunk::{concentration_lower, val_drunk_truncated, DEFAULT_BELIEF_CAP};
use cir::game::{cop_moves, CopConfig, MoveRule, Rules};
use cir::graph::{self, Graph};
use cir::play::{evaluate_pair, trial_rng};
use cir::strategies::{DrunkRobber, ScheduleCop, StarInfSpeedCop, StationaryCop, UniformLeafRobber};
use cir::weight::{rat, Rational};
use common::*;
use rand::Rng;

fn all_sequences(g: &Graph, cops: usize, len: usize) -> Vec<Vec<CopConfig>> {
    let mut seqs: Vec<Vec<CopConfig>> = cir::game::all_configs(g.n(), cops).into_iter().map(|c| vec![c]).collect();
    for _ in 1..len {
        seqs = seqs
            .into_iter()
            .flat_map(|s| {
                let last = s.last().unwrap().clone();
                cop_moves(g, &last, MoveRule::Lazy).into_iter().map(move |z| {
                    let mut t = s.clone();
                    t.push(z);
                    t
                })
            })
            .collect();
    }
    seqs
}

/// Robber's best payoff when the cops' whole trajectory is known in advance.
fn informed_robber(adj: &[Vec<usize>], seq: &[CopConfig], m: usize) -> usize {
    let n = adj.len();
    // best[y]: payoff from the end of turn t with the robber on y
    let mut best = vec![m; n];
    for t in (0..m - 1).rev() {
        let z = &seq[t + 1];
        best = (0..n)
            .map(|y| {
                if z.contains(y) {
                    t + 1
                } else {
                    std::iter::once(y)
                        .chain(adj[y].iter().copied())
                        .filter(|&u| !z.contains(u))
                        .map(|u| best[u])
                        .max()
                        .unwrap()
                }
            })
            .collect();
    }
    (0..n).filter(|&y| !seq[0].contains(y)).map(|y| best[y]).max().unwrap_or(0)
}

/// Expected payoff of a robber who hides uniformly on the lowest-degree
/// vertices free of cops and never moves.
fn static_robber(g: &Graph, seq: &[CopConfig], m: usize) -> Rational {
    let n = g.n();
    let free: Vec<usize> = (0..n).filter(|&y| !seq[0].contains(y)).collect();
    let Some(low) = free.iter().map(|&y| g.degree(y)).min() else {
        return q(0, 1);
    };
    let hidden: Vec<usize> = free.into_iter().filter(|&y| g.degree(y) == low).collect();
    let mut total = q(1, 1);
    let mut visited = vec![false; n];
    for z in &seq[1..m] {
        for &v in z.iter() {
            visited[v] = true;
        }
        let alive = hidden.iter().filter(|&&y| !visited[y]).count();
        total += q(alive as i64, hidden.len() as i64);
    }
    total
}

#[test]
fn lp_value_between_pure_strategy_bounds() {
    let cases = [("star:2", 1, 4), ("star:3", 1, 5), ("path:3", 1, 4), ("path:4", 1, 5), ("cycle:4", 2, 3)];
    for (spec, cops, m) in cases {
        let g = Graph::from_spec(spec).unwrap();
        let adj = adjacency(&g);
        let seqs = all_sequences(&g, cops, m);
        let upper = seqs.iter().map(|s| informed_robber(&adj, s, m)).min().unwrap() as f64;
        let lower = seqs.iter().map(|s| to_f64(&static_robber(&g, s, m))).fold(f64::INFINITY, f64::min);
        let v = solve_exact(&g, cops, m, Rules::default()).unwrap().value;
        assert!(lower - 1e-6 <= v && v <= upper + 1e-6, "{spec} m={m}: {lower} <= {v} <= {upper}");
    }
}

#[test]
fn static_robber_bound_is_tight_on_stars() {
    for leaves in 1..=3usize {
        let g = graph::star(leaves).unwrap();
        let m = 2 * leaves;
        let seqs = all_sequences(&g, 1, m);
        let lower = seqs.iter().map(|s| static_robber(&g, s, m)).min().unwrap();
        assert_eq!(lower, q(leaves as i64, 1));
        let v = solve_exact(&g, 1, m, Rules::default()).unwrap().value;
        assert!((v - leaves as f64).abs() < 1e-6);
    }
}

/// With two turns the robber is caught only if the cop jumps onto his hiding
/// place, which is a guessing game on the starting vertex's neighborhood.
#[test]
fn two_turn_game_closed_form() {
    for spec in ["star:1", "star:2", "star:4", "path:3", "path:5", "cycle:4", "cycle:6", "tree:d=2,L=2", "grid:3"] {
        let g = Graph::from_spec(spec).unwrap();
        let n = g.n();
        let dominating = (0..n).any(|v| g.degree(v) == n - 1);
        let want = if dominating { 2.0 - 1.0 / (n - 1) as f64 } else { 2.0 };
        let v = solve_exact(&g, 1, 2, Rules::default()).unwrap().value;
        assert!((v - want).abs() < 1e-6, "{spec}: {v} vs {want}");
    }
}

#[test]
fn cfr_matches_lp() {
    for (spec, m) in [("star:2", 4), ("path:3", 3)] {
        let g = Graph::from_spec(spec).unwrap();
        let game = build_game(&g, 1, m, Rules::default(), DEFAULT_NODE_CAP).unwrap();
        let it = solve_iterative(&g, &game, 2000, 1e-4).unwrap();
        let ex = solve_exact(&g, 1, m, Rules::default()).unwrap();
        assert!(it.cop_best - 1e-6 <= ex.value && ex.value <= it.robber_best + 1e-6, "{spec}: {it:?}");
        assert!(it.exploitability < 1e-2);
    }
}

#[test]
fn stationary_drunk_time_matches_linear_solve() {
    for spec in ["path:6", "cycle:7", "star:4", "tree:d=2,L=2", "tree:d=3,L=2", "grid:3", "broom:c=0.5,n=10"] {
        let g = Graph::from_spec(spec).unwrap();
        let adj = adjacency(&g);
        for v in [0, g.n() / 2] {
            let cops = CopConfig::single(v);
            let lib = stationary_ect::<Rational>(&g, &cops, 1).unwrap();
            assert_eq!(lib, stationary_hitting_time(&adj, &[v]), "{spec} cop at {v}");
            let pair = evaluate_pair(&g, &StationaryCop::new(&g, cops).unwrap(), &DrunkRobber::new(1), Rules::default(), 20_000).unwrap();
            assert!((pair.expected - to_f64(&lib)).abs() < 1e-6, "{spec}: {} vs {lib}", pair.expected);
        }
    }
}

#[test]
fn schedule_capture_time_matches_forward_propagation() {
    let mut rng = trial_rng(5, 0);
    for spec in ["path:5", "cycle:6", "star:3", "tree:d=2,L=2", "grid:3"] {
        let g = Graph::from_spec(spec).unwrap();
        let adj = adjacency(&g);
        for _ in 0..20 {
            let len = rng.gen_range(1..9);
            let mut walk = vec![rng.gen_range(0..g.n())];
            while walk.len() < len {
                let at = *walk.last().unwrap();
                let options: Vec<usize> = std::iter::once(at).chain(adj[at].iter().copied()).collect();
                walk.push(options[rng.gen_range(0..options.len())]);
            }
            let sched = CopSchedule::single(&g, &walk).unwrap();
            let lib = schedule_ect::<Rational>(&g, &sched, 1).unwrap();
            let (expected, residual) = drunk_schedule(&adj, &walk);
            assert_eq!(lib.residual, residual, "{spec} {walk:?}");
            // survivors of the last turn are charged one more turn by the library
            assert_eq!(lib.expected, expected.clone() + residual, "{spec} {walk:?}");
            assert_eq!(lib.total_mass(), q(1, 1));
            let pair = evaluate_pair(&g, &ScheduleCop::new(&sched), &DrunkRobber::new(1), Rules::default(), len - 1).unwrap();
            assert!((pair.expected - to_f64(&expected)).abs() < 1e-9, "{spec} {walk:?}");
        }
    }
}

#[test]
fn tree_layer_times_match_linear_solve() {
    for (d, depth) in [(2, 1), (2, 3), (3, 2), (4, 2)] {
        let g = graph::complete_tree(d, depth).unwrap();
        let h = hitting_times(&adjacency(&g), &[0]);
        let e = tree_e(d, depth).unwrap();
        for v in 1..g.n() {
            let layer = g.tree_layer(v).unwrap();
            assert_eq!(h[v], e[layer - 1], "d={d} L={depth} v={v}");
        }
        assert_eq!(tree_e_deepest(d, depth).unwrap(), *e.last().unwrap());
    }
}

#[test]
fn drunk_star_values() {
    for leaves in 1..=4usize {
        let g = graph::star(leaves).unwrap();
        let s = val_drunk_truncated(&g, 1, 3, Rules::default(), DEFAULT_BELIEF_CAP).unwrap();
        assert_eq!(s.value, rat(leaves as i64, leaves as i64 + 1));
    }
    let g = graph::star(2).unwrap();
    let one = val_drunk_truncated(&g, 1, 1, Rules::default(), DEFAULT_BELIEF_CAP).unwrap();
    assert_eq!(one.value, q(2, 3));
}

#[test]
fn fast_robber_on_stars() {
    for leaves in 1..=5usize {
        let g = graph::star(leaves).unwrap();
        let v = evaluate_pair(
            &g,
            &StarInfSpeedCop::new(&g).unwrap(),
            &UniformLeafRobber::new(&g).unwrap(),
            Rules::with_speed(g.n() + 3),
            500,
        )
        .unwrap();
        assert!((v.expected - to_f64(&star_infspeed_ect(leaves))).abs() < 1e-9);
        assert_eq!(star_infspeed_ect(leaves), q(2 * leaves as i64 - 1, 1));
    }
}

#[test]
fn bound_substitutions() {
    // (T̂ + D)(Δ + 1)^T̂ n with T̂ = 1, D = 2, Δ = 2, n = 3
    for spec in ["path:3", "star:2"] {
        let b = guess_chase_upper(&Graph::from_spec(spec).unwrap()).unwrap();
        assert_eq!(b.value, q(27, 1), "{spec}");
    }
    assert_eq!(grid_guess_chase_expression(5), q(14 * 25 * 625, 1));
    let p50 = concentration_lower(&graph::path(50).unwrap(), 1).unwrap();
    assert!((p50.bound.unwrap() - 49.0 / (14.0 * std::f64::consts::E)).abs() < 1e-12);
    let grid = concentration_lower(&graph::grid(20).unwrap(), 2).unwrap();
    assert!((grid.bound.unwrap() - 398.0 / (28.0 * std::f64::consts::E)).abs() < 1e-12);
    let c9 = concentration_lower(&graph::cycle(9).unwrap(), 1).unwrap();
    assert!(!c9.applies(), "2/16 exceeds 1/24");
}
