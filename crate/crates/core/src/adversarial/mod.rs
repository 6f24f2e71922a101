//! The adversarial robber: exact values of the truncated game, CFR+ for larger
//! trees, and exploitability certificates for both.

pub mod cfr;
pub mod lp;
pub mod tree;

use std::sync::Arc;

use serde::Serialize;

use crate::error::Result;
use crate::game::Rules;
use crate::graph::Graph;
use crate::play::{best_response_value, cop_best_response};
use crate::weight::{fmt_rational, snap_rational};

pub use cfr::{cfr_plus, CfrSolution, DEFAULT_VISIT_CAP};
pub use lp::{solve_lp, LpModel, TableCop, TableRobber, DEFAULT_HISTORY_CAP};
pub use tree::{build_game, ExtensiveGame, NodeKind, DEFAULT_NODE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Iterative,
}

/// One information set of a behavioral strategy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyEntry {
    pub infoset: String,
    pub actions: Vec<(String, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub graph: String,
    pub cops: usize,
    pub horizon: usize,
    pub speed: usize,
    pub method: Method,
    pub value: f64,
    /// Small-denominator fraction matching `value`, when one exists.
    pub value_fraction: Option<String>,
    /// Best robber payoff against the reported cop strategy.
    pub robber_best: f64,
    /// Best cop payoff against the reported robber strategy.
    pub cop_best: f64,
    pub exploitability: f64,
    pub iterations: Option<usize>,
    /// Histories or tree nodes, depending on the method.
    pub size: usize,
    pub cop_strategy: Vec<StrategyEntry>,
    pub robber_strategy: Vec<StrategyEntry>,
}

fn fraction(x: f64) -> Option<String> {
    snap_rational(x, 1000, 1e-6).map(|r| fmt_rational(&r))
}

fn entries(table: Vec<(String, Vec<(String, f64)>)>) -> Vec<StrategyEntry> {
    table
        .into_iter()
        .map(|(infoset, actions)| StrategyEntry { infoset, actions })
        .collect()
}

/// Solves the `horizon`-turn game exactly and certifies both strategies by
/// exact best responses.
pub fn solve_exact(g: &Graph, cops: usize, horizon: usize, rules: Rules) -> Result<SolveReport> {
    if horizon == 0 {
        return Ok(SolveReport {
            graph: g.label(),
            cops,
            horizon,
            speed: rules.speed,
            method: Method::Exact,
            value: 0.0,
            value_fraction: Some("0".into()),
            robber_best: 0.0,
            cop_best: 0.0,
            exploitability: 0.0,
            iterations: None,
            size: 0,
            cop_strategy: Vec::new(),
            robber_strategy: Vec::new(),
        });
    }
    let model = Arc::new(solve_lp(g, cops, horizon, rules, DEFAULT_HISTORY_CAP)?);
    let cop = TableCop::new(model.clone(), cops);
    let robber = TableRobber::new(model.clone());
    let robber_best = best_response_value(g, &cop, rules, horizon)?.value;
    let cop_best = cop_best_response(g, cops, &robber, rules, horizon)?;
    Ok(SolveReport {
        graph: g.label(),
        cops,
        horizon,
        speed: rules.speed,
        method: Method::Exact,
        value: model.value,
        value_fraction: fraction(model.value),
        robber_best,
        cop_best,
        exploitability: (robber_best - cop_best).max(0.0),
        iterations: None,
        size: model.histories(),
        cop_strategy: entries(model.cop_table()),
        robber_strategy: entries(model.robber_table()),
    })
}

/// CFR+ on the explicit tree; stops at `iters` or once exploitability drops to `target`.
pub fn solve_iterative(g: &Graph, game: &ExtensiveGame, iters: usize, target: f64) -> Result<SolveReport> {
    let s = cfr_plus(game, iters, target, DEFAULT_VISIT_CAP)?;
    let cop_strategy = game
        .cop_infosets
        .iter()
        .enumerate()
        .map(|(i, info)| StrategyEntry {
            infoset: game.cop_label(i),
            actions: info
                .actions
                .iter()
                .zip(&s.cop[i])
                .filter(|(_, &p)| p > 1e-9)
                .map(|(a, &p)| (a.to_string(), p))
                .collect(),
        })
        .collect();
    let robber_strategy = game
        .nodes
        .iter()
        .enumerate()
        .filter(|(_, n)| matches!(n.kind, NodeKind::Robber { .. }))
        .map(|(id, _)| StrategyEntry {
            infoset: format!("{}#{id}", game.robber_label(id)),
            actions: game.robber_moves[&id]
                .iter()
                .zip(&s.robber[id])
                .filter(|(_, &p)| p > 1e-9)
                .map(|(z, &p)| (z.to_string(), p))
                .collect(),
        })
        .collect();
    Ok(SolveReport {
        graph: g.label(),
        cops: game.cops,
        horizon: game.horizon,
        speed: game.rules.speed,
        method: Method::Iterative,
        value: s.value,
        value_fraction: None,
        robber_best: s.robber_best,
        cop_best: s.cop_best,
        exploitability: s.exploitability(),
        iterations: Some(s.iterations),
        size: game.len(),
        cop_strategy,
        robber_strategy,
    })
}

/// `val` of the `m`-turn game for `m = 0..=m_max`.
pub fn value_sequence(g: &Graph, cops: usize, m_max: usize, rules: Rules) -> Result<Vec<f64>> {
    (0..=m_max)
        .map(|m| solve_exact(g, cops, m, rules).map(|r| r.value))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    #[test]
    fn small_exact_values() {
        let s2 = graph::star(2).unwrap();
        let r = solve_exact(&s2, 1, 4, Rules::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-6, "{}", r.value);
        assert!(r.exploitability < 1e-6, "{r:?}");
        let r1 = solve_exact(&s2, 1, 1, Rules::default()).unwrap();
        assert!((r1.value - 1.0).abs() < 1e-6);
        let p3 = graph::path(3).unwrap();
        let r = solve_exact(&p3, 1, 4, Rules::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-6);
        assert!(r.exploitability < 1e-6);
    }

    #[test]
    fn exact_and_iterative_agree_on_star() {
        let g = graph::star(2).unwrap();
        let game = build_game(&g, 1, 3, Rules::default(), DEFAULT_NODE_CAP).unwrap();
        let it = solve_iterative(&g, &game, 3000, 1e-4).unwrap();
        let ex = solve_exact(&g, 1, 3, Rules::default()).unwrap();
        assert!((it.value - ex.value).abs() < 1e-2, "{} vs {}", it.value, ex.value);
    }
}
