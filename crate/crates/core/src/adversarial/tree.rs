//! Explicit game tree of the truncated game.
//!
//! Cop decision nodes share an information set whenever their cop histories
//! agree. Robber nodes are singletons: the robber sees everything. Robber moves
//! onto a cop are dominated by any safe move and are left out; a robber node
//! with no safe move becomes a terminal paying the current turn.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::game::{all_configs, cop_moves, robber_moves, CopConfig, Rules};
use crate::graph::Graph;

use super::lp::history_label;

/// Default cap on the number of tree nodes.
pub const DEFAULT_NODE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    /// Cop decision; the index points into [`ExtensiveGame::cop_infosets`].
    Cop { infoset: usize },
    /// Robber decision at vertex `at` (`None` for the placement).
    Robber { at: Option<usize> },
    Terminal { payoff: usize },
}

#[derive(Debug, Clone)]
pub struct Node {
    pub kind: NodeKind,
    pub depth: usize,
    /// Cop history leading here, which is also the robber's view of the cops.
    pub history: usize,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct CopInfoset {
    pub history: Vec<CopConfig>,
    pub actions: Vec<CopConfig>,
    pub nodes: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ExtensiveGame {
    pub cops: usize,
    pub horizon: usize,
    pub rules: Rules,
    pub nodes: Vec<Node>,
    pub cop_infosets: Vec<CopInfoset>,
    /// Distinct cop histories referenced by [`Node::history`].
    pub histories: Vec<Vec<CopConfig>>,
    /// Robber move labels, parallel to each robber node's children.
    pub robber_moves: HashMap<usize, Vec<usize>>,
}

struct Build<'a> {
    g: &'a Graph,
    rules: Rules,
    horizon: usize,
    cap: usize,
    game: ExtensiveGame,
    infoset_of: HashMap<Vec<CopConfig>, usize>,
    history_of: HashMap<Vec<CopConfig>, usize>,
}

impl Build<'_> {
    fn push(&mut self, kind: NodeKind, depth: usize, history: usize) -> Result<usize> {
        let id = self.game.nodes.len();
        if id >= self.cap {
            return Err(Error::TooLarge {
                what: "game tree",
                size: id + 1,
                cap: self.cap,
            });
        }
        self.game.nodes.push(Node {
            kind,
            depth,
            history,
            children: Vec::new(),
        });
        Ok(id)
    }

    fn history_id(&mut self, h: &[CopConfig]) -> usize {
        if let Some(&id) = self.history_of.get(h) {
            return id;
        }
        let id = self.game.histories.len();
        self.game.histories.push(h.to_vec());
        self.history_of.insert(h.to_vec(), id);
        id
    }

    fn cop_node(&mut self, hist: &[CopConfig], depth: usize, y: Option<usize>) -> Result<usize> {
        let actions = match hist.last() {
            None => all_configs(self.g.n(), self.game.cops),
            Some(x) => cop_moves(self.g, x, self.rules.moves),
        };
        let infoset = match self.infoset_of.get(hist) {
            Some(&i) => i,
            None => {
                let i = self.game.cop_infosets.len();
                self.game.cop_infosets.push(CopInfoset {
                    history: hist.to_vec(),
                    actions: actions.clone(),
                    nodes: Vec::new(),
                });
                self.infoset_of.insert(hist.to_vec(), i);
                i
            }
        };
        let hid = self.history_id(hist);
        let id = self.push(NodeKind::Cop { infoset }, depth, hid)?;
        self.game.cop_infosets[infoset].nodes.push(id);
        let t = hist.len();
        let mut children = Vec::with_capacity(actions.len());
        for x in actions {
            let mut h = hist.to_vec();
            h.push(x.clone());
            let child = match y {
                Some(y) if x.contains(y) => {
                    let hid = self.history_id(&h);
                    self.push(NodeKind::Terminal { payoff: t }, depth + 1, hid)?
                }
                _ => self.robber_node(&h, depth + 1, y)?,
            };
            children.push(child);
        }
        self.game.nodes[id].children = children;
        Ok(id)
    }

    fn robber_node(&mut self, hist: &[CopConfig], depth: usize, y: Option<usize>) -> Result<usize> {
        let t = hist.len() - 1;
        let x = hist.last().expect("cops have moved");
        let moves: Vec<usize> = match y {
            None => (0..self.g.n()).filter(|&v| !x.contains(v)).collect(),
            Some(y) => robber_moves(self.g, y, x, self.rules.speed, self.rules.moves),
        };
        let hid = self.history_id(hist);
        if moves.is_empty() {
            return self.push(NodeKind::Terminal { payoff: t }, depth, hid);
        }
        let id = self.push(NodeKind::Robber { at: y }, depth, hid)?;
        let mut children = Vec::with_capacity(moves.len());
        for &z in &moves {
            let child = if t + 1 >= self.horizon {
                self.push(NodeKind::Terminal { payoff: self.horizon }, depth + 1, hid)?
            } else {
                self.cop_node(hist, depth + 1, Some(z))?
            };
            children.push(child);
        }
        self.game.nodes[id].children = children;
        self.game.robber_moves.insert(id, moves);
        Ok(id)
    }
}

/// Builds the tree of the `horizon`-turn game with `cops` cops.
pub fn build_game(g: &Graph, cops: usize, horizon: usize, rules: Rules, cap: usize) -> Result<ExtensiveGame> {
    if cops == 0 || cops > g.n() {
        return Err(Error::param(format!("need 1..={} cops, got {cops}", g.n())));
    }
    let mut b = Build {
        g,
        rules,
        horizon,
        cap,
        game: ExtensiveGame {
            cops,
            horizon,
            rules,
            nodes: Vec::new(),
            cop_infosets: Vec::new(),
            histories: Vec::new(),
            robber_moves: HashMap::new(),
        },
        infoset_of: HashMap::new(),
        history_of: HashMap::new(),
    };
    if horizon == 0 {
        b.history_id(&[]);
        b.push(NodeKind::Terminal { payoff: 0 }, 0, 0)?;
    } else {
        b.cop_node(&[], 0, None)?;
    }
    Ok(b.game)
}

impl ExtensiveGame {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn max_depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// Label of a robber node: cop history and the robber's vertex.
    pub fn robber_label(&self, node: usize) -> String {
        let n = &self.nodes[node];
        let at = match n.kind {
            NodeKind::Robber { at: Some(y) } => y.to_string(),
            _ => "start".to_string(),
        };
        format!("{}|{}", history_label(&self.histories[n.history]), at)
    }

    pub fn cop_label(&self, infoset: usize) -> String {
        let h = &self.cop_infosets[infoset].history;
        if h.is_empty() {
            "root".into()
        } else {
            history_label(h)
        }
    }

    /// One line per node: `id player infoset children payoff`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (id, n) in self.nodes.iter().enumerate() {
            let kids = n.children.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
            let (player, infoset, payoff) = match n.kind {
                NodeKind::Cop { infoset } => ("cop", self.cop_label(infoset), "-".to_string()),
                NodeKind::Robber { .. } => ("robber", self.robber_label(id), "-".to_string()),
                NodeKind::Terminal { payoff } => ("leaf", "-".to_string(), payoff.to_string()),
            };
            let kids = if kids.is_empty() { "-".to_string() } else { kids };
            let _ = writeln!(out, "{id} {player} {infoset} {kids} {payoff}");
        }
        out
    }
}
