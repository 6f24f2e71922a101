//! Positions and move rules shared by every variant of the game.
//!
//! Turn order: at `t = 0` the cops place `X_0` and then the robber places `Y_0`;
//! at every later turn the cops move first and the robber replies. Capture is
//! checked after each half-move and the capture time is the turn index.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Cop positions as a sorted multiset (two cops may share a vertex).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CopConfig(Vec<usize>);

impl CopConfig {
    pub fn new(mut cops: Vec<usize>) -> Self {
        cops.sort_unstable();
        CopConfig(cops)
    }

    pub fn single(v: usize) -> Self {
        CopConfig(vec![v])
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Number of distinct occupied vertices.
    pub fn occupied(&self) -> usize {
        let mut v = self.0.clone();
        v.dedup();
        v.len()
    }

    /// Occupancy mask over `n` vertices.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.0 {
            m[v] = true;
        }
        m
    }
}

impl fmt::Display for CopConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Whether players may stand still.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MoveRule {
    /// Closed-neighborhood moves for the cops and the adversarial robber.
    #[default]
    Lazy,
    /// Every move traverses at least one edge.
    Forced,
}

impl FromStr for MoveRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lazy" => Ok(MoveRule::Lazy),
            "forced" | "forced-move" => Ok(MoveRule::Forced),
            _ => Err(Error::Parse {
                input: s.into(),
                reason: "expected `lazy` or `forced`".into(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RobberMode {
    Adversarial,
    Drunk,
}

impl FromStr for RobberMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adversarial" => Ok(RobberMode::Adversarial),
            "drunk" => Ok(RobberMode::Drunk),
            _ => Err(Error::Parse {
                input: s.into(),
                reason: "expected `adversarial` or `drunk`".into(),
            }),
        }
    }
}

/// Parameters of one game instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameConfig {
    pub cops: usize,
    pub mode: RobberMode,
    pub speed: usize,
    /// Truncation horizon `m`; the payoff is `min(T, m)`.
    pub horizon: usize,
    pub moves: MoveRule,
}

impl GameConfig {
    pub fn new(cops: usize, mode: RobberMode, horizon: usize) -> Self {
        GameConfig {
            cops,
            mode,
            speed: 1,
            horizon,
            moves: MoveRule::Lazy,
        }
    }

    pub fn with_speed(mut self, speed: usize) -> Self {
        self.speed = speed;
        self
    }

    pub fn with_moves(mut self, moves: MoveRule) -> Self {
        self.moves = moves;
        self
    }

    pub fn rules(&self) -> Rules {
        Rules {
            speed: self.speed,
            moves: self.moves,
        }
    }
}

/// The movement part of a [`GameConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rules {
    pub speed: usize,
    pub moves: MoveRule,
}

impl Default for Rules {
    fn default() -> Self {
        Rules {
            speed: 1,
            moves: MoveRule::Lazy,
        }
    }
}

impl Rules {
    pub fn with_speed(speed: usize) -> Self {
        Rules {
            speed,
            ..Rules::default()
        }
    }
}

/// Vertices one cop at `v` may move to.
pub fn cop_steps(g: &Graph, v: usize, rule: MoveRule) -> Vec<usize> {
    let mut out = g.neighbors(v).to_vec();
    if rule == MoveRule::Lazy || out.is_empty() {
        out.push(v);
        out.sort_unstable();
    }
    out
}

/// All configurations reachable in one cop move, sorted and deduplicated.
pub fn cop_moves(g: &Graph, from: &CopConfig, rule: MoveRule) -> Vec<CopConfig> {
    let options: Vec<Vec<usize>> = from.iter().map(|&v| cop_steps(g, v, rule)).collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; options.len()];
    loop {
        out.push(CopConfig::new(
            pick.iter().zip(&options).map(|(&i, o)| o[i]).collect(),
        ));
        let mut k = 0;
        while k < pick.len() {
            pick[k] += 1;
            if pick[k] < options[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
        if k == pick.len() {
            break;
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Whether `to` can follow `from` in one cop move (a perfect matching of cops to targets).
pub fn is_cop_move(g: &Graph, from: &CopConfig, to: &CopConfig, rule: MoveRule) -> bool {
    if from.len() != to.len() {
        return false;
    }
    let allowed = |a: usize, b: usize| {
        g.has_edge(a, b) || (a == b && (rule == MoveRule::Lazy || g.degree(a) == 0))
    };
    let k = from.len();
    let mut owner: Vec<Option<usize>> = vec![None; k];
    fn augment(
        i: usize,
        from: &[usize],
        to: &[usize],
        allowed: &dyn Fn(usize, usize) -> bool,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for j in 0..to.len() {
            if seen[j] || !allowed(from[i], to[j]) {
                continue;
            }
            seen[j] = true;
            if owner[j].map_or(true, |o| augment(o, from, to, allowed, seen, owner)) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }
    (0..k).all(|i| {
        let mut seen = vec![false; k];
        augment(i, from.as_slice(), to.as_slice(), &allowed, &mut seen, &mut owner)
    })
}

/// All sorted multisets of `k` vertices out of `n`.
pub fn all_configs(n: usize, k: usize) -> Vec<CopConfig> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<CopConfig>) {
        if cur.len() == k {
            out.push(CopConfig(cur.clone()));
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(n, k, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Number of sorted multisets of size `k` from `n` vertices, saturating.
pub fn config_count(n: usize, k: usize) -> usize {
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = c * (n as u128 + i) / (i + 1);
        if c > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    c as usize
}

/// Safe robber destinations from `y` after the cops moved to `cops`: vertices
/// reached by walks of at most `speed` edges that never enter a cop vertex.
/// Under [`MoveRule::Forced`] the walk has at least one edge.
pub fn robber_moves(g: &Graph, y: usize, cops: &CopConfig, speed: usize, rule: MoveRule) -> Vec<usize> {
    let n = g.n();
    let blocked = cops.mask(n);
    if blocked[y] {
        return Vec::new();
    }
    let mut reach = vec![false; n];
    let mut frontier = vec![false; n];
    frontier[y] = true;
    if rule == MoveRule::Lazy {
        reach[y] = true;
    }
    for _ in 0..speed.min(2 * n) {
        let mut next = vec![false; n];
        for u in (0..n).filter(|&u| frontier[u]) {
            for &v in g.neighbors(u) {
                if !blocked[v] {
                    next[v] = true;
                }
            }
        }
        let mut changed = false;
        for v in 0..n {
            if next[v] && !reach[v] {
                reach[v] = true;
                changed = true;
            }
        }
        if !changed && next == frontier {
            break;
        }
        frontier = next;
    }
    (0..n).filter(|&v| reach[v]).collect()
}

/// Whether the robber can legally end his move at `to` (possibly a cop vertex,
/// which means capture): some walk of at most `speed` edges whose interior avoids cops.
pub fn robber_can_reach(
    g: &Graph,
    y: usize,
    to: usize,
    cops: &CopConfig,
    speed: usize,
    rule: MoveRule,
) -> bool {
    if y == to && rule == MoveRule::Lazy {
        return true;
    }
    speed >= 1
        && robber_moves(g, y, cops, speed - 1, MoveRule::Lazy)
            .iter()
            .any(|&u| g.has_edge(u, to))
}

/// Checks a cop transition and names the offending turn if infeasible.
pub fn check_cop_move(
    g: &Graph,
    from: &CopConfig,
    to: &CopConfig,
    rule: MoveRule,
    turn: usize,
) -> Result<()> {
    if to.iter().any(|&v| v >= g.n()) {
        return Err(Error::Infeasible {
            turn,
            detail: format!("cop position {to} outside the graph"),
        });
    }
    if !is_cop_move(g, from, to, rule) {
        return Err(Error::Infeasible {
            turn,
            detail: format!("cops cannot move from {from} to {to}"),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    #[test]
    fn cop_moves_on_path() {
        let g = graph::path(3).unwrap();
        let m = cop_moves(&g, &CopConfig::single(0), MoveRule::Lazy);
        assert_eq!(m, vec![CopConfig::single(0), CopConfig::single(1)]);
        let m = cop_moves(&g, &CopConfig::single(1), MoveRule::Forced);
        assert_eq!(m, vec![CopConfig::single(0), CopConfig::single(2)]);
        let two = cop_moves(&g, &CopConfig::new(vec![0, 2]), MoveRule::Lazy);
        assert_eq!(two.len(), 4);
    }

    #[test]
    fn matching_feasibility() {
        let g = graph::path(4).unwrap();
        let a = CopConfig::new(vec![0, 3]);
        assert!(is_cop_move(&g, &a, &CopConfig::new(vec![1, 2]), MoveRule::Lazy));
        assert!(!is_cop_move(&g, &a, &CopConfig::new(vec![1, 1]), MoveRule::Lazy));
        assert!(is_cop_move(&g, &a, &CopConfig::new(vec![0, 2]), MoveRule::Lazy));
        assert!(!is_cop_move(&g, &a, &CopConfig::new(vec![0, 2]), MoveRule::Forced));
        for b in cop_moves(&g, &a, MoveRule::Lazy) {
            assert!(is_cop_move(&g, &a, &b, MoveRule::Lazy));
        }
    }

    #[test]
    fn robber_reach_respects_blocking() {
        let g = graph::star(3).unwrap();
        let center = CopConfig::single(0);
        assert_eq!(robber_moves(&g, 1, &center, 4, MoveRule::Lazy), vec![1]);
        assert!(robber_moves(&g, 1, &center, 4, MoveRule::Forced).is_empty());
        let leaf = CopConfig::single(1);
        assert_eq!(robber_moves(&g, 2, &leaf, 4, MoveRule::Lazy), vec![0, 2, 3]);
        assert_eq!(robber_moves(&g, 2, &leaf, 1, MoveRule::Forced), vec![0]);
        assert_eq!(robber_moves(&g, 2, &leaf, 2, MoveRule::Forced), vec![0, 2, 3]);
        assert!(robber_can_reach(&g, 2, 0, &center, 1, MoveRule::Forced));
        assert!(robber_can_reach(&g, 2, 1, &leaf, 2, MoveRule::Forced));
        assert!(!robber_can_reach(&g, 2, 1, &leaf, 1, MoveRule::Forced));
    }

    #[test]
    fn config_enumeration() {
        assert_eq!(all_configs(5, 2).len(), 15);
        assert_eq!(config_count(5, 2), 15);
        assert_eq!(config_count(10, 3), 220);
        assert_eq!(all_configs(3, 1).len(), 3);
    }
}
