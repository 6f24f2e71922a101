use crate::error::{Error, Result};
use crate::game::CopConfig;
use crate::graph::{Family, Graph};
use crate::play::{CopStrategy, Dist, RobberStrategy};

/// Index arithmetic for the BFS-numbered complete `d`-ary tree.
#[derive(Debug, Clone, Copy)]
struct Shape {
    d: usize,
    depth: usize,
}

impl Shape {
    fn of(g: &Graph, who: &str) -> Result<Self> {
        match *g.family() {
            Family::Tree { d, depth } => Ok(Shape { d, depth }),
            _ => Err(Error::not_applicable(
                who,
                format!("{} is not a complete d-ary tree", g.label()),
            )),
        }
    }

    fn parent(&self, v: usize) -> usize {
        (v - 1) / self.d
    }

    fn children(&self, v: usize) -> std::ops::RangeInclusive<usize> {
        self.d * v + 1..=self.d * v + self.d
    }

    fn layer(&self, v: usize) -> usize {
        let (mut layer, mut first, mut width) = (0, 0, 1);
        while v >= first + width {
            first += width;
            width *= self.d;
            layer += 1;
        }
        layer
    }

    fn layer_vertices(&self, layer: usize) -> std::ops::Range<usize> {
        let first: usize = (0..layer).map(|l| self.d.pow(l as u32)).sum();
        first..first + self.d.pow(layer as u32)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TreeStage {
    /// Walking from the root to a random preleaf.
    Descend,
    /// At or around `preleaf`, with the leaves still to visit.
    Leaves { preleaf: usize, remaining: Vec<usize> },
    /// Walking back to the root.
    Ascend,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeRoundState {
    pub round: usize,
    pub stage: TreeStage,
}

/// Rounds of `2L + 2(d-1)` steps: root, random preleaf, its leaves in random
/// order (back to the preleaf in between), root.
#[derive(Debug, Clone)]
pub struct TreeRoundCop {
    shape: Shape,
}

impl TreeRoundCop {
    pub fn new(g: &Graph) -> Result<Self> {
        Ok(TreeRoundCop {
            shape: Shape::of(g, "tree-round")?,
        })
    }

    pub fn round_length(&self) -> usize {
        2 * self.shape.depth + 2 * (self.shape.d - 1)
    }

    fn visit_leaves(&self, preleaf: usize, remaining: Vec<usize>, round: usize) -> Dist<CopConfig, TreeRoundState> {
        let p = 1.0 / remaining.len() as f64;
        remaining
            .iter()
            .map(|&leaf| {
                let rest = remaining.iter().copied().filter(|&l| l != leaf).collect();
                (
                    p,
                    CopConfig::single(leaf),
                    TreeRoundState {
                        round,
                        stage: TreeStage::Leaves {
                            preleaf,
                            remaining: rest,
                        },
                    },
                )
            })
            .collect()
    }

    /// Moves from the preleaf `v` at the start of a leaf phase (or descends further).
    fn from_vertex(&self, v: usize, round: usize) -> Dist<CopConfig, TreeRoundState> {
        let s = &self.shape;
        if s.layer(v) + 1 == s.depth {
            return self.visit_leaves(v, s.children(v).collect(), round);
        }
        let p = 1.0 / s.d as f64;
        s.children(v)
            .map(|c| {
                let stage = if s.layer(c) + 1 == s.depth {
                    TreeStage::Leaves {
                        preleaf: c,
                        remaining: s.children(c).collect(),
                    }
                } else {
                    TreeStage::Descend
                };
                (p, CopConfig::single(c), TreeRoundState { round, stage })
            })
            .collect()
    }
}

impl CopStrategy for TreeRoundCop {
    type State = TreeRoundState;

    fn name(&self) -> String {
        "tree-round".into()
    }

    fn cops(&self) -> usize {
        1
    }

    fn start(&self, _g: &Graph) -> Result<Dist<CopConfig, TreeRoundState>> {
        let stage = if self.shape.depth == 1 {
            TreeStage::Leaves {
                preleaf: 0,
                remaining: self.shape.children(0).collect(),
            }
        } else {
            TreeStage::Descend
        };
        Ok(vec![(1.0, CopConfig::single(0), TreeRoundState { round: 0, stage })])
    }

    fn next(&self, _g: &Graph, current: &CopConfig, state: &TreeRoundState) -> Result<Dist<CopConfig, TreeRoundState>> {
        let s = &self.shape;
        let v = current.as_slice()[0];
        let round = state.round;
        let out = match &state.stage {
            TreeStage::Descend => self.from_vertex(v, round),
            TreeStage::Leaves { preleaf, remaining } => {
                if v != *preleaf {
                    let stage = if remaining.is_empty() {
                        TreeStage::Ascend
                    } else {
                        state.stage.clone()
                    };
                    vec![(1.0, CopConfig::single(*preleaf), TreeRoundState { round, stage })]
                } else if remaining.is_empty() {
                    self.ascend(v, round)
                } else {
                    self.visit_leaves(*preleaf, remaining.clone(), round)
                }
            }
            TreeStage::Ascend => self.ascend(v, round),
        };
        debug_assert!(out.iter().all(|(_, c, _)| {
            let w = c.as_slice()[0];
            w == v || (w > 0 && s.parent(w) == v) || (v > 0 && s.parent(v) == w)
        }));
        Ok(out)
    }

    fn round(&self, state: &TreeRoundState) -> Option<usize> {
        Some(state.round)
    }
}

impl TreeRoundCop {
    fn ascend(&self, v: usize, round: usize) -> Dist<CopConfig, TreeRoundState> {
        if v == 0 {
            // Already at the root (depth-one trees): start the next round right away.
            return self.from_vertex(0, round + 1);
        }
        let up = self.shape.parent(v);
        let state = if up == 0 {
            TreeRoundState {
                round: round + 1,
                stage: if self.shape.depth == 1 {
                    TreeStage::Leaves {
                        preleaf: 0,
                        remaining: self.shape.children(0).collect(),
                    }
                } else {
                    TreeStage::Descend
                },
            }
        } else {
            TreeRoundState {
                round,
                stage: TreeStage::Ascend,
            }
        };
        vec![(1.0, CopConfig::single(up), state)]
    }
}

/// Robber that keeps (after each of his moves) distance two from the cop,
/// preferring vertices closer to the root.
#[derive(Debug, Clone)]
pub struct TreeDistance2Robber {
    shape: Shape,
}

impl TreeDistance2Robber {
    pub fn new(g: &Graph) -> Result<Self> {
        let shape = Shape::of(g, "tree-distance2")?;
        if shape.depth < 2 {
            return Err(Error::not_applicable(
                "tree-distance2",
                "needs depth L >= 2 so that distance two is available",
            ));
        }
        Ok(TreeDistance2Robber { shape })
    }

    fn uniform(vs: Vec<usize>) -> Dist<usize, ()> {
        let p = 1.0 / vs.len() as f64;
        vs.into_iter().map(|v| (p, v, ())).collect()
    }
}

impl RobberStrategy for TreeDistance2Robber {
    type State = ();

    fn name(&self) -> String {
        "tree-distance2".into()
    }

    fn place(&self, _g: &Graph, cops: &CopConfig) -> Result<Dist<usize, ()>> {
        let s = &self.shape;
        if cops.len() != 1 {
            return Err(Error::not_applicable("tree-distance2", "plays against a single cop"));
        }
        let x = cops.as_slice()[0];
        Ok(match s.layer(x) {
            0 => Self::uniform(s.layer_vertices(2).collect()),
            1 => Self::uniform(s.layer_vertices(1).filter(|&v| v != x).collect()),
            _ => vec![(1.0, s.parent(s.parent(x)), ())],
        })
    }

    fn respond(&self, g: &Graph, cops: &CopConfig, robber: usize, _state: &()) -> Result<Dist<usize, ()>> {
        let s = &self.shape;
        let x = cops.as_slice()[0];
        let at_two = |v: &usize| g.distance(x, *v) == 2;
        match g.distance(x, robber) {
            1 => {
                let options: Vec<usize> = g.neighbors(robber).iter().copied().filter(at_two).collect();
                match options.iter().map(|&v| s.layer(v)).min() {
                    None => Ok(vec![(1.0, robber, ())]),
                    Some(top) => Ok(Self::uniform(
                        options.into_iter().filter(|&v| s.layer(v) == top).collect(),
                    )),
                }
            }
            2 => Ok(vec![(1.0, robber, ())]),
            3 => {
                let options: Vec<usize> = g.neighbors(robber).iter().copied().filter(at_two).collect();
                match options.as_slice() {
                    [v] => Ok(vec![(1.0, *v, ())]),
                    _ => Err(Error::Infeasible {
                        turn: 0,
                        detail: format!(
                            "distance-three state without a unique retreat (cop {x}, robber {robber})"
                        ),
                    }),
                }
            }
            dist => Err(Error::Infeasible {
                turn: 0,
                detail: format!("cop {x} and robber {robber} at distance {dist}, outside the case analysis"),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Rules;
    use crate::graph;
    use crate::play::{monte_carlo, play_trial, trial_rng, McConfig};

    #[test]
    fn round_length_and_first_round() {
        let g = graph::complete_tree(3, 2).unwrap();
        let cop = TreeRoundCop::new(&g).unwrap();
        assert_eq!(cop.round_length(), 8);
        let mut rng = trial_rng(1, 0);
        let (mut x, mut s) = cop.sample_start(&g, &mut rng).unwrap();
        let mut steps = 0;
        while s.round == 0 {
            let (nx, ns) = cop.sample_next(&g, &x, &s, &mut rng).unwrap();
            assert!(nx == x || g.has_edge(x.as_slice()[0], nx.as_slice()[0]));
            x = nx;
            s = ns;
            steps += 1;
        }
        assert_eq!(steps, 8);
        assert_eq!(x, CopConfig::single(0));
    }

    #[test]
    fn distance2_placements() {
        let g = graph::complete_tree(2, 3).unwrap();
        let r = TreeDistance2Robber::new(&g).unwrap();
        // vertex 7 is on layer 3; its grandparent is 1
        assert_eq!(r.place(&g, &CopConfig::single(7)).unwrap(), vec![(1.0, 1, ())]);
        let first = r.place(&g, &CopConfig::single(1)).unwrap();
        assert_eq!(first.iter().map(|e| e.1).collect::<Vec<_>>(), vec![2]);
        let root = r.place(&g, &CopConfig::single(0)).unwrap();
        assert_eq!(root.iter().map(|e| e.1).collect::<Vec<_>>(), vec![3, 4, 5, 6]);
    }

    #[test]
    fn distance_three_has_unique_retreat() {
        let g = graph::complete_tree(2, 3).unwrap();
        let r = TreeDistance2Robber::new(&g).unwrap();
        // cop at 9 (below 4, below 1) and robber at the root
        assert_eq!(g.distance(9, 1), 2);
        assert_eq!(g.distance(9, 0), 3);
        let reply = r.respond(&g, &CopConfig::single(9), 0, &()).unwrap();
        assert_eq!(reply, vec![(1.0, 1, ())]);
    }

    #[test]
    fn robber_survives_placement() {
        let g = graph::complete_tree(2, 3).unwrap();
        let cop = TreeRoundCop::new(&g).unwrap();
        let robber = TreeDistance2Robber::new(&g).unwrap();
        for trial in 0..500 {
            let mut rng = trial_rng(11, trial);
            let out = play_trial(&g, &cop, &robber, Rules::default(), 10_000, &mut rng)
                .unwrap()
                .unwrap();
            assert!(out.capture_time > 0);
        }
        let rep = monte_carlo(&g, &cop, &robber, Rules::default(), McConfig::new(2000, 3)).unwrap();
        assert!(rep.mean > 10.0);
    }
}
