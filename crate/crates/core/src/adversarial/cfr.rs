//! CFR+ self-play on the explicit tree, with exact best responses for the
//! exploitability certificate.

use crate::error::{Error, Result};

use super::tree::{ExtensiveGame, NodeKind};

/// Default cap on node visits across all iterations.
pub const DEFAULT_VISIT_CAP: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Cop,
    Robber,
}

/// Average strategies after a CFR+ run.
#[derive(Debug, Clone)]
pub struct CfrSolution {
    pub iterations: usize,
    pub visits: u64,
    /// Average cop strategy per information set, parallel to `cop_infosets[i].actions`.
    pub cop: Vec<Vec<f64>>,
    /// Average robber strategy per robber node (empty for other nodes).
    pub robber: Vec<Vec<f64>>,
    /// Value of the average strategy pair.
    pub value: f64,
    /// Best robber reply against the average cop strategy.
    pub robber_best: f64,
    /// Best cop reply against the average robber strategy.
    pub cop_best: f64,
    /// `(iteration, exploitability)` at each checkpoint.
    pub trace: Vec<(usize, f64)>,
}

impl CfrSolution {
    pub fn exploitability(&self) -> f64 {
        (self.robber_best - self.cop_best).max(0.0)
    }
}

struct Cfr<'a> {
    game: &'a ExtensiveGame,
    cop_regret: Vec<Vec<f64>>,
    cop_delta: Vec<Vec<f64>>,
    cop_sum: Vec<Vec<f64>>,
    cop_now: Vec<Vec<f64>>,
    rob_regret: Vec<Vec<f64>>,
    rob_sum: Vec<Vec<f64>>,
    stamp: Vec<usize>,
    pass: usize,
    visits: u64,
}

fn matched(regret: &[f64], out: &mut Vec<f64>) {
    out.clear();
    let total: f64 = regret.iter().map(|r| r.max(0.0)).sum();
    if total > 0.0 {
        out.extend(regret.iter().map(|r| r.max(0.0) / total));
    } else {
        out.extend(std::iter::repeat(1.0 / regret.len() as f64).take(regret.len()));
    }
}

fn normalized(sum: &[f64]) -> Vec<f64> {
    let total: f64 = sum.iter().sum();
    if total > 0.0 {
        sum.iter().map(|s| s / total).collect()
    } else {
        vec![1.0 / sum.len() as f64; sum.len()]
    }
}

impl Cfr<'_> {
    fn new(game: &ExtensiveGame) -> Cfr<'_> {
        let cop = |g: &ExtensiveGame| -> Vec<Vec<f64>> {
            g.cop_infosets.iter().map(|i| vec![0.0; i.actions.len()]).collect()
        };
        let rob: Vec<Vec<f64>> = game
            .nodes
            .iter()
            .map(|n| match n.kind {
                NodeKind::Robber { .. } => vec![0.0; n.children.len()],
                _ => Vec::new(),
            })
            .collect();
        Cfr {
            game,
            cop_regret: cop(game),
            cop_delta: cop(game),
            cop_sum: cop(game),
            cop_now: cop(game),
            rob_regret: rob.clone(),
            rob_sum: rob,
            stamp: vec![0; game.cop_infosets.len()],
            pass: 0,
            visits: 0,
        }
    }

    /// Robber payoff of the current strategies below `node`, updating `side`.
    fn walk(&mut self, node: usize, reach_cop: f64, reach_rob: f64, side: Side, weight: f64) -> f64 {
        self.visits += 1;
        let game = self.game;
        let n = &game.nodes[node];
        match n.kind {
            NodeKind::Terminal { payoff } => payoff as f64,
            NodeKind::Cop { infoset } => {
                let sigma = self.cop_now[infoset].clone();
                let mut values = vec![0.0; sigma.len()];
                let mut v = 0.0;
                for (a, &child) in n.children.iter().enumerate() {
                    values[a] = self.walk(child, reach_cop * sigma[a], reach_rob, side, weight);
                    v += sigma[a] * values[a];
                }
                if side == Side::Cop {
                    // the cop's own reach is shared by the whole information set
                    let first = self.stamp[infoset] != self.pass;
                    self.stamp[infoset] = self.pass;
                    for a in 0..sigma.len() {
                        self.cop_delta[infoset][a] += reach_rob * (v - values[a]);
                        if first {
                            self.cop_sum[infoset][a] += weight * reach_cop * sigma[a];
                        }
                    }
                }
                v
            }
            NodeKind::Robber { .. } => {
                let mut sigma = Vec::new();
                matched(&self.rob_regret[node], &mut sigma);
                let mut values = vec![0.0; sigma.len()];
                let mut v = 0.0;
                for (a, &child) in n.children.iter().enumerate() {
                    values[a] = self.walk(child, reach_cop, reach_rob * sigma[a], side, weight);
                    v += sigma[a] * values[a];
                }
                if side == Side::Robber {
                    for a in 0..sigma.len() {
                        let r = &mut self.rob_regret[node][a];
                        *r = (*r + reach_cop * (values[a] - v)).max(0.0);
                        self.rob_sum[node][a] += weight * reach_rob * sigma[a];
                    }
                }
                v
            }
        }
    }

    fn iterate(&mut self, t: usize) {
        let weight = t as f64;
        self.pass = t;
        for (i, r) in self.cop_regret.iter().enumerate() {
            let mut s = Vec::new();
            matched(r, &mut s);
            self.cop_now[i] = s;
        }
        self.walk(0, 1.0, 1.0, Side::Cop, weight);
        for (r, d) in self.cop_regret.iter_mut().zip(self.cop_delta.iter_mut()) {
            for (ra, da) in r.iter_mut().zip(d.iter_mut()) {
                *ra = (*ra + *da).max(0.0);
                *da = 0.0;
            }
        }
        for (i, r) in self.cop_regret.iter().enumerate() {
            let mut s = Vec::new();
            matched(r, &mut s);
            self.cop_now[i] = s;
        }
        self.walk(0, 1.0, 1.0, Side::Robber, weight);
    }
}

/// Value of the pair `(cop, robber)` of behavioral strategies.
pub fn pair_value(game: &ExtensiveGame, cop: &[Vec<f64>], robber: &[Vec<f64>]) -> f64 {
    let mut val = vec![0.0; game.len()];
    for id in (0..game.len()).rev() {
        let n = &game.nodes[id];
        val[id] = match n.kind {
            NodeKind::Terminal { payoff } => payoff as f64,
            NodeKind::Cop { infoset } => n.children.iter().zip(&cop[infoset]).map(|(&c, p)| p * val[c]).sum(),
            NodeKind::Robber { .. } => n.children.iter().zip(&robber[id]).map(|(&c, p)| p * val[c]).sum(),
        };
    }
    val.first().copied().unwrap_or(0.0)
}

/// Best robber payoff against a fixed cop strategy.
pub fn robber_best_response(game: &ExtensiveGame, cop: &[Vec<f64>]) -> f64 {
    let mut val = vec![0.0; game.len()];
    for id in (0..game.len()).rev() {
        let n = &game.nodes[id];
        val[id] = match n.kind {
            NodeKind::Terminal { payoff } => payoff as f64,
            NodeKind::Cop { infoset } => n.children.iter().zip(&cop[infoset]).map(|(&c, p)| p * val[c]).sum(),
            NodeKind::Robber { .. } => n.children.iter().map(|&c| val[c]).fold(f64::NEG_INFINITY, f64::max),
        };
    }
    val.first().copied().unwrap_or(0.0)
}

/// Best cop payoff against a fixed robber strategy, respecting cop information sets.
pub fn cop_best_response(game: &ExtensiveGame, robber: &[Vec<f64>]) -> f64 {
    let len = game.len();
    if len == 0 {
        return 0.0;
    }
    // node ids grow along every path, so a forward sweep sees parents first
    let mut reach = vec![0.0; len];
    reach[0] = 1.0;
    for id in 0..len {
        let n = &game.nodes[id];
        for (a, &c) in n.children.iter().enumerate() {
            reach[c] = match n.kind {
                NodeKind::Robber { .. } => reach[id] * robber[id][a],
                _ => reach[id],
            };
        }
    }
    let depth = game.max_depth();
    let mut by_depth: Vec<Vec<usize>> = vec![Vec::new(); depth + 1];
    for (id, n) in game.nodes.iter().enumerate() {
        by_depth[n.depth].push(id);
    }
    let mut choice = vec![usize::MAX; game.cop_infosets.len()];
    let mut val = vec![0.0; len];
    for d in (0..=depth).rev() {
        for &id in &by_depth[d] {
            if let NodeKind::Cop { infoset } = game.nodes[id].kind {
                if choice[infoset] != usize::MAX {
                    continue;
                }
                let info = &game.cop_infosets[infoset];
                let mut best = (f64::INFINITY, 0);
                for a in 0..info.actions.len() {
                    let score: f64 = info
                        .nodes
                        .iter()
                        .map(|&h| reach[h] * val[game.nodes[h].children[a]])
                        .sum();
                    if score < best.0 - 1e-12 {
                        best = (score, a);
                    }
                }
                choice[infoset] = best.1;
            }
        }
        for &id in &by_depth[d] {
            let n = &game.nodes[id];
            val[id] = match n.kind {
                NodeKind::Terminal { payoff } => payoff as f64,
                NodeKind::Cop { infoset } => val[n.children[choice[infoset]]],
                NodeKind::Robber { .. } => n.children.iter().zip(&robber[id]).map(|(&c, p)| p * val[c]).sum(),
            };
        }
    }
    val[0]
}

/// Runs CFR+ until `iters` iterations, the target exploitability, or the visit cap.
pub fn cfr_plus(game: &ExtensiveGame, iters: usize, target: f64, visit_cap: u64) -> Result<CfrSolution> {
    if iters == 0 {
        return Err(Error::param("iterations must be at least 1"));
    }
    let mut cfr = Cfr::new(game);
    let mut trace = Vec::new();
    let check_every = (iters / 50).max(1);
    let mut done = 0;
    let summarize = |cfr: &Cfr, done: usize, trace: Vec<(usize, f64)>| {
        let cop: Vec<Vec<f64>> = cfr.cop_sum.iter().map(|s| normalized(s)).collect();
        let robber: Vec<Vec<f64>> = cfr
            .rob_sum
            .iter()
            .map(|s| if s.is_empty() { Vec::new() } else { normalized(s) })
            .collect();
        CfrSolution {
            iterations: done,
            visits: cfr.visits,
            value: pair_value(game, &cop, &robber),
            robber_best: robber_best_response(game, &cop),
            cop_best: cop_best_response(game, &robber),
            cop,
            robber,
            trace,
        }
    };
    for t in 1..=iters {
        if cfr.visits.saturating_add(2 * game.len() as u64) > visit_cap && done > 0 {
            break;
        }
        cfr.iterate(t);
        done = t;
        if t % check_every == 0 || t == iters {
            let s = summarize(&cfr, done, Vec::new());
            trace.push((t, s.exploitability()));
            if s.exploitability() <= target {
                break;
            }
        }
    }
    if trace.last().map_or(true, |e| e.0 != done) {
        let s = summarize(&cfr, done, Vec::new());
        trace.push((done, s.exploitability()));
    }
    Ok(summarize(&cfr, done, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversarial::tree::{build_game, DEFAULT_NODE_CAP};
    use crate::game::Rules;
    use crate::graph;

    #[test]
    fn one_iteration_is_well_formed() {
        let g = graph::star(2).unwrap();
        let game = build_game(&g, 1, 4, Rules::default(), DEFAULT_NODE_CAP).unwrap();
        let s = cfr_plus(&game, 1, 0.0, DEFAULT_VISIT_CAP).unwrap();
        assert_eq!(s.iterations, 1);
        assert!(s.cop_best <= s.value + 1e-9 && s.value <= s.robber_best + 1e-9);
        assert!(s.exploitability() > 0.1);
    }

    #[test]
    fn star_two_converges() {
        let g = graph::star(2).unwrap();
        let game = build_game(&g, 1, 4, Rules::default(), DEFAULT_NODE_CAP).unwrap();
        let s = cfr_plus(&game, 2000, 1e-3, DEFAULT_VISIT_CAP).unwrap();
        assert!(s.exploitability() <= 1e-3, "{}", s.exploitability());
        assert!(s.cop_best <= 2.0 + 1e-9 && 2.0 <= s.robber_best + 1e-9);
    }
}
