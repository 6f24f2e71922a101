//! Retrograde analysis of the visible game, which supplies the cop number and
//! the worst-case optimal capture time `T̂`.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{all_configs, config_count, cop_moves, robber_moves, CopConfig, MoveRule};
use crate::graph::{Family, Graph};

pub const DEFAULT_STATE_CAP: usize = 2_000_000;

const UNRESOLVED: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VisibleSolveResult {
    pub guaranteed: bool,
    /// `None` stands for an infinite capture time.
    pub t_hat: Option<usize>,
    pub optimal_start: Option<CopConfig>,
}

/// Full retrograde table for `K` cops; keeps enough to replay optimal cop moves.
#[derive(Debug, Clone)]
pub struct VisibleSolution {
    n: usize,
    configs: Vec<CopConfig>,
    index: HashMap<CopConfig, usize>,
    moves: Vec<Vec<usize>>,
    /// `w[c * n + y]`: cop turns needed when the cops are at `configs[c]`, about
    /// to move, and the robber sits at `y`.
    w: Vec<u32>,
    result: VisibleSolveResult,
}

impl VisibleSolution {
    pub fn solve(g: &Graph, cops: usize, rule: MoveRule, cap: usize) -> Result<Self> {
        let n = g.n();
        if cops == 0 || cops > n {
            return Err(Error::param(format!("need 1 <= K <= n, got K={cops}")));
        }
        let size = config_count(n, cops).saturating_mul(n);
        if size > cap {
            return Err(Error::TooLarge {
                what: "visible game state space",
                size,
                cap,
            });
        }
        let configs = all_configs(n, cops);
        let index: HashMap<CopConfig, usize> =
            configs.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let moves: Vec<Vec<usize>> = configs
            .iter()
            .map(|c| cop_moves(g, c, rule).iter().map(|m| index[m]).collect())
            .collect();
        let escapes: Vec<Vec<Vec<usize>>> = configs
            .iter()
            .map(|c| (0..n).map(|y| robber_moves(g, y, c, 1, rule)).collect())
            .collect();

        let mut w = vec![UNRESOLVED; configs.len() * n];
        for round in 1u32.. {
            let mut updates = Vec::new();
            for (c, cfg) in configs.iter().enumerate() {
                for y in (0..n).filter(|&y| !cfg.contains(y)) {
                    if w[c * n + y] != UNRESOLVED {
                        continue;
                    }
                    let wins = moves[c].iter().any(|&m| {
                        configs[m].contains(y)
                            || escapes[m][y].iter().all(|&z| w[m * n + z] < round)
                    });
                    if wins {
                        updates.push(c * n + y);
                    }
                }
            }
            if updates.is_empty() {
                break;
            }
            for s in updates {
                w[s] = round;
            }
        }

        let mut best: Option<(u32, usize)> = None;
        for (c, cfg) in configs.iter().enumerate() {
            let worst = (0..n)
                .filter(|&y| !cfg.contains(y))
                .map(|y| w[c * n + y])
                .max()
                .unwrap_or(0);
            if worst != UNRESOLVED && best.map_or(true, |(b, _)| worst < b) {
                best = Some((worst, c));
            }
        }
        let result = VisibleSolveResult {
            guaranteed: best.is_some(),
            t_hat: best.map(|(t, _)| t as usize),
            optimal_start: best.map(|(_, c)| configs[c].clone()),
        };
        Ok(VisibleSolution {
            n,
            configs,
            index,
            moves,
            w,
            result,
        })
    }

    pub fn result(&self) -> &VisibleSolveResult {
        &self.result
    }

    /// Remaining cop turns from `(cops, robber)` with the cops to move, if finite.
    pub fn turns_to_capture(&self, cops: &CopConfig, robber: usize) -> Option<usize> {
        let c = self.index[cops];
        match self.w[c * self.n + robber] {
            UNRESOLVED => None,
            v => Some(v as usize),
        }
    }

    /// Optimal cop reply when the robber is known to be at `robber`
    /// (lowest configuration index on ties).
    pub fn best_reply(&self, cops: &CopConfig, robber: usize) -> CopConfig {
        let c = self.index[cops];
        let score = |m: usize| -> u32 {
            if self.configs[m].contains(robber) {
                0
            } else {
                self.w[m * self.n + robber]
            }
        };
        let best = self.moves[c]
            .iter()
            .copied()
            .min_by_key(|&m| (score(m), m))
            .expect("cops always have a move");
        self.configs[best].clone()
    }
}

pub fn visible_solve(g: &Graph, cops: usize) -> Result<VisibleSolveResult> {
    Ok(VisibleSolution::solve(g, cops, MoveRule::Lazy, DEFAULT_STATE_CAP)?
        .result()
        .clone())
}

/// Smallest `K` for which the cops can force capture of a visible robber.
pub fn cop_number(g: &Graph) -> Result<usize> {
    if let Some(k) = known_cop_number(g) {
        return Ok(k);
    }
    cop_number_search(g, DEFAULT_STATE_CAP)
}

/// Incremental search without family shortcuts.
pub fn cop_number_search(g: &Graph, cap: usize) -> Result<usize> {
    for k in 1..=g.n() {
        if VisibleSolution::solve(g, k, MoveRule::Lazy, cap)?.result().guaranteed {
            return Ok(k);
        }
    }
    unreachable!("n cops always capture")
}

fn known_cop_number(g: &Graph) -> Option<usize> {
    match *g.family() {
        Family::Path { .. } | Family::Star { .. } | Family::Tree { .. } | Family::Broom { .. } => {
            Some(1)
        }
        Family::Grid { .. } => Some(2),
        Family::Cycle { n } => Some(if n <= 3 { 1 } else { 2 }),
        Family::Custom => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    #[test]
    fn path3_one_cop_from_center() {
        let r = visible_solve(&graph::path(3).unwrap(), 1).unwrap();
        assert!(r.guaranteed);
        assert_eq!(r.t_hat, Some(1));
        assert_eq!(r.optimal_start, Some(CopConfig::single(1)));
    }

    #[test]
    fn single_vertex() {
        let r = visible_solve(&graph::path(1).unwrap(), 1).unwrap();
        assert_eq!((r.guaranteed, r.t_hat), (true, Some(0)));
    }

    #[test]
    fn grid_needs_two() {
        let g = graph::grid(3).unwrap();
        assert!(!visible_solve(&g, 1).unwrap().guaranteed);
        let two = visible_solve(&g, 2).unwrap();
        assert!(two.guaranteed);
        assert_eq!(cop_number_search(&g, DEFAULT_STATE_CAP).unwrap(), 2);
    }

    #[test]
    fn cycles() {
        let c4 = graph::cycle(4).unwrap();
        assert_eq!(cop_number_search(&c4, DEFAULT_STATE_CAP).unwrap(), 2);
        let c3 = graph::cycle(3).unwrap();
        assert_eq!(cop_number_search(&c3, DEFAULT_STATE_CAP).unwrap(), 1);
        assert_eq!(cop_number(&c4).unwrap(), 2);
    }

    #[test]
    fn cap_is_enforced() {
        let g = graph::grid(4).unwrap();
        assert!(matches!(
            VisibleSolution::solve(&g, 2, MoveRule::Lazy, 100),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn best_reply_moves_onto_robber() {
        let g = graph::star(3).unwrap();
        let sol = VisibleSolution::solve(&g, 1, MoveRule::Lazy, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(sol.best_reply(&CopConfig::single(0), 2), CopConfig::single(2));
        assert_eq!(sol.turns_to_capture(&CopConfig::single(0), 2), Some(1));
    }
}
