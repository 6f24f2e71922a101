//! Conditional position distribution of a drunk robber under a known cop trajectory.
//!
//! Each turn is split in three phases: after the cop move (`p̄`), after the robber
//! step but before captures are applied (`p̂`), and at the end of the turn (`p`).
//! All three are conditioned on the robber still being free. Capture masses
//! reported by [`schedule_ect`] are unconditional, so they sum to one together
//! with the residual survival mass.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{check_cop_move, CopConfig, MoveRule};
use crate::graph::Graph;
use crate::weight::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    PostCop,
    PostRobber,
    EndOfTurn,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Belief<W> {
    pub probs: Vec<W>,
    pub phase: Phase,
    pub turn: usize,
}

impl<W: Weight> Belief<W> {
    pub fn total(&self) -> W {
        self.probs.iter().cloned().sum()
    }

    fn expect(&self, phase: Phase) -> Result<()> {
        if self.phase == phase {
            Ok(())
        } else {
            Err(Error::Phase {
                expected: phase,
                found: self.phase,
            })
        }
    }
}

#[derive(Debug, Clone)]
pub struct InitialBeliefs<W> {
    /// Identically zero: the robber has not entered the graph yet.
    pub pre_cop: Belief<W>,
    /// Uniform placement before the collision check.
    pub placed: Belief<W>,
    pub capture: W,
    /// `None` when the cops cover every vertex.
    pub end: Option<Belief<W>>,
}

/// Turn-zero beliefs for a cop placement `z0`.
pub fn init_beliefs<W: Weight>(g: &Graph, z0: &CopConfig) -> Result<InitialBeliefs<W>> {
    let n = g.n();
    check_positions(g, z0)?;
    let occupied = z0.occupied();
    let uniform = W::ratio(1, n as u64);
    let placed = Belief {
        probs: vec![uniform; n],
        phase: Phase::PostRobber,
        turn: 0,
    };
    let capture = W::ratio(occupied as u64, n as u64);
    let end = (occupied < n).then(|| {
        let free = W::ratio(1, (n - occupied) as u64);
        Belief {
            probs: (0..n)
                .map(|v| if z0.contains(v) { W::zero() } else { free.clone() })
                .collect(),
            phase: Phase::EndOfTurn,
            turn: 0,
        }
    });
    Ok(InitialBeliefs {
        pre_cop: Belief {
            probs: vec![W::zero(); n],
            phase: Phase::PostCop,
            turn: 0,
        },
        placed,
        capture,
        end,
    })
}

fn check_positions(g: &Graph, z: &CopConfig) -> Result<()> {
    if z.is_empty() {
        return Err(Error::param("at least one cop is required"));
    }
    match z.iter().find(|&&v| v >= g.n()) {
        Some(v) => Err(Error::param(format!("cop vertex {v} outside the graph"))),
        None => Ok(()),
    }
}

/// Removes the mass on `z` and renormalizes; `None` when nothing survives.
fn condition<W: Weight>(probs: &[W], z: &CopConfig) -> (W, Option<Vec<W>>) {
    let capture: W = z_mass(probs, z);
    let survive = W::one() - capture.clone();
    if survive.is_negligible() || survive <= W::zero() {
        return (W::one(), None);
    }
    let out = probs
        .iter()
        .enumerate()
        .map(|(v, p)| {
            if z.contains(v) {
                W::zero()
            } else {
                p.clone() / survive.clone()
            }
        })
        .collect();
    (capture, Some(out))
}

fn z_mass<W: Weight>(probs: &[W], z: &CopConfig) -> W {
    let mut seen = Vec::with_capacity(z.len());
    let mut total = W::zero();
    for &u in z.iter() {
        if !seen.contains(&u) {
            seen.push(u);
            total = total + probs[u].clone();
        }
    }
    total
}

#[derive(Debug, Clone)]
pub struct CopStep<W> {
    pub capture: W,
    /// `None` signals certain capture.
    pub belief: Option<Belief<W>>,
}

/// Cop half-move of a turn (the conditioning step).
pub fn step_cop<W: Weight>(g: &Graph, prev: &Belief<W>, z: &CopConfig) -> Result<CopStep<W>> {
    prev.expect(Phase::EndOfTurn)?;
    check_positions(g, z)?;
    let (capture, probs) = condition(&prev.probs, z);
    Ok(CopStep {
        capture,
        belief: probs.map(|probs| Belief {
            probs,
            phase: Phase::PostCop,
            turn: prev.turn + 1,
        }),
    })
}

/// Pushes a distribution through `speed` random-walk substeps; mass that steps
/// onto a vertex of `z` is absorbed there.
pub fn walk<W: Weight>(g: &Graph, probs: &[W], z: &CopConfig, speed: usize) -> Vec<W> {
    let n = g.n();
    let absorbing = z.mask(n);
    let mut cur = probs.to_vec();
    for _ in 0..speed {
        let mut next = vec![W::zero(); n];
        for u in 0..n {
            if cur[u] == W::zero() {
                continue;
            }
            if absorbing[u] {
                next[u] = next[u].clone() + cur[u].clone();
                continue;
            }
            let share = cur[u].clone() / W::from_usize(g.degree(u));
            for &v in g.neighbors(u) {
                next[v] = next[v].clone() + share.clone();
            }
        }
        cur = next;
    }
    cur
}

#[derive(Debug, Clone)]
pub struct RobberStep<W> {
    pub moved: Belief<W>,
    pub capture: W,
    pub end: Option<Belief<W>>,
}

/// Robber half-move: `speed` substeps with absorption, then conditioning.
pub fn step_robber<W: Weight>(
    g: &Graph,
    post_cop: &Belief<W>,
    z: &CopConfig,
    speed: usize,
) -> Result<RobberStep<W>> {
    post_cop.expect(Phase::PostCop)?;
    if speed == 0 {
        return Err(Error::param("robber speed must be at least 1"));
    }
    let moved = walk(g, &post_cop.probs, z, speed);
    let (capture, probs) = condition(&moved, z);
    let turn = post_cop.turn;
    Ok(RobberStep {
        moved: Belief {
            probs: moved,
            phase: Phase::PostRobber,
            turn,
        },
        capture,
        end: probs.map(|probs| Belief {
            probs,
            phase: Phase::EndOfTurn,
            turn,
        }),
    })
}

/// A fixed cop trajectory `Z_0, Z_1, ...` with every transition checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CopSchedule {
    positions: Vec<CopConfig>,
}

impl CopSchedule {
    pub fn new(g: &Graph, positions: Vec<CopConfig>, rule: MoveRule) -> Result<Self> {
        let first = positions
            .first()
            .ok_or_else(|| Error::param("schedule must contain at least the placement"))?;
        check_positions(g, first)?;
        for (t, pair) in positions.windows(2).enumerate() {
            if pair[1].len() != first.len() {
                return Err(Error::Infeasible {
                    turn: t + 1,
                    detail: "cop count changed".into(),
                });
            }
            check_cop_move(g, &pair[0], &pair[1], rule, t + 1)?;
        }
        Ok(CopSchedule { positions })
    }

    /// Single-cop schedule from a vertex sequence.
    pub fn single(g: &Graph, vertices: &[usize]) -> Result<Self> {
        CopSchedule::new(
            g,
            vertices.iter().map(|&v| CopConfig::single(v)).collect(),
            MoveRule::Lazy,
        )
    }

    pub fn positions(&self) -> &[CopConfig] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Capture-time distribution of a finite schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct CaptureDistribution<W> {
    /// Unconditional capture mass per turn (turns with zero mass omitted).
    pub masses: Vec<(usize, W)>,
    pub residual: W,
    /// Exact `E(T)` when `residual` is zero; otherwise a lower bound that charges
    /// every survivor the schedule length.
    pub expected: W,
    pub exact: bool,
}

impl<W: Weight> CaptureDistribution<W> {
    pub fn to_f64(&self) -> CaptureDistribution<f64> {
        CaptureDistribution {
            masses: self.masses.iter().map(|(t, p)| (*t, p.to_f64())).collect(),
            residual: self.residual.to_f64(),
            expected: self.expected.to_f64(),
            exact: self.exact,
        }
    }

    pub fn total_mass(&self) -> W {
        self.masses.iter().map(|(_, p)| p.clone()).sum::<W>() + self.residual.clone()
    }
}

impl<W: Weight> Serialize for CaptureDistribution<W> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            masses: Vec<(usize, f64)>,
            residual: f64,
            expected: f64,
            exact: bool,
        }
        let f = self.to_f64();
        Wire {
            masses: f.masses,
            residual: f.residual,
            expected: f.expected,
            exact: f.exact,
        }
        .serialize(s)
    }
}

/// Exact capture-time distribution of the drunk robber against `sched`.
pub fn schedule_ect<W: Weight>(
    g: &Graph,
    sched: &CopSchedule,
    speed: usize,
) -> Result<CaptureDistribution<W>> {
    let positions = sched.positions();
    let init = init_beliefs::<W>(g, &positions[0])?;
    let mut masses = Vec::new();
    let mut alive = W::one() - init.capture.clone();
    push_mass(&mut masses, 0, init.capture);
    let mut belief = init.end;
    for (t, z) in positions.iter().enumerate().skip(1) {
        let Some(prev) = belief.take() else { break };
        let cop = step_cop(g, &prev, z)?;
        push_mass(&mut masses, t, alive.clone() * cop.capture.clone());
        alive = alive * (W::one() - cop.capture);
        let Some(post) = cop.belief else {
            alive = W::zero();
            break;
        };
        let rob = step_robber(g, &post, z, speed)?;
        push_mass(&mut masses, t, alive.clone() * rob.capture.clone());
        alive = alive * (W::one() - rob.capture);
        belief = rob.end;
        if belief.is_none() {
            alive = W::zero();
        }
    }
    if belief.is_none() {
        alive = W::zero();
    }
    let expected = masses
        .iter()
        .map(|(t, p)| W::from_usize(*t) * p.clone())
        .sum::<W>()
        + alive.clone() * W::from_usize(positions.len());
    let exact = alive.is_negligible();
    Ok(CaptureDistribution {
        masses,
        residual: alive,
        expected,
        exact,
    })
}

fn push_mass<W: Weight>(masses: &mut Vec<(usize, W)>, t: usize, p: W) {
    if p.is_negligible() {
        return;
    }
    match masses.last_mut() {
        Some((last, acc)) if *last == t => *acc = acc.clone() + p,
        _ => masses.push((t, p)),
    }
}

/// Transition matrix of one turn restricted to cop-free vertices: `speed` walk
/// substeps with absorption at the cops.
fn transient_matrix<W: Weight>(g: &Graph, free: &[usize], speed: usize) -> Vec<Vec<W>> {
    let n = g.n();
    let mut slot = vec![usize::MAX; n];
    for (i, &v) in free.iter().enumerate() {
        slot[v] = i;
    }
    let k = free.len();
    let mut q = vec![vec![W::zero(); k]; k];
    for (i, &u) in free.iter().enumerate() {
        let share = W::ratio(1, g.degree(u) as u64);
        for &v in g.neighbors(u) {
            if slot[v] != usize::MAX {
                q[i][slot[v]] = q[i][slot[v]].clone() + share.clone();
            }
        }
    }
    mat_pow(q, speed)
}

fn mat_mul<W: Weight>(a: &[Vec<W>], b: &[Vec<W>]) -> Vec<Vec<W>> {
    let k = a.len();
    let mut out = vec![vec![W::zero(); k]; k];
    for i in 0..k {
        for (l, a_il) in a[i].iter().enumerate() {
            if *a_il == W::zero() {
                continue;
            }
            for j in 0..k {
                if b[l][j] != W::zero() {
                    out[i][j] = out[i][j].clone() + a_il.clone() * b[l][j].clone();
                }
            }
        }
    }
    out
}

fn mat_pow<W: Weight>(mut base: Vec<Vec<W>>, mut e: usize) -> Vec<Vec<W>> {
    let k = base.len();
    let mut acc: Vec<Vec<W>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { W::one() } else { W::zero() }).collect())
        .collect();
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base);
        }
    }
    acc
}

/// Solves `a x = b` by Gaussian elimination with largest-magnitude pivoting.
pub fn solve_linear<W: Weight>(mut a: Vec<Vec<W>>, mut b: Vec<W>) -> Result<Vec<W>> {
    let k = b.len();
    for col in 0..k {
        let pivot = (col..k)
            .filter(|&r| a[r][col] != W::zero())
            .max_by(|&r, &s| {
                a[r][col]
                    .to_f64()
                    .abs()
                    .total_cmp(&a[s][col].to_f64().abs())
            })
            .ok_or_else(|| Error::Solver("singular linear system".into()))?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..k {
            if r == col || a[r][col] == W::zero() {
                continue;
            }
            let factor = a[r][col].clone() / a[col][col].clone();
            for c in col..k {
                let delta = factor.clone() * a[col][c].clone();
                a[r][c] = a[r][c].clone() - delta;
            }
            b[r] = b[r].clone() - factor * b[col].clone();
        }
    }
    Ok((0..k).map(|i| b[i].clone() / a[i][i].clone()).collect())
}

/// Expected remaining turns `h(v)` until a walker started at `v` is absorbed by
/// stationary cops; `h` is zero on cop vertices.
pub fn absorption_times<W: Weight>(g: &Graph, cops: &CopConfig, speed: usize) -> Result<Vec<W>> {
    check_positions(g, cops)?;
    if speed == 0 {
        return Err(Error::param("robber speed must be at least 1"));
    }
    let n = g.n();
    let free: Vec<usize> = (0..n).filter(|&v| !cops.contains(v)).collect();
    let q = transient_matrix::<W>(g, &free, speed);
    let k = free.len();
    let a: Vec<Vec<W>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let id = if i == j { W::one() } else { W::zero() };
                    id - q[i][j].clone()
                })
                .collect()
        })
        .collect();
    let h_free = solve_linear(a, vec![W::one(); k])?;
    let mut h = vec![W::zero(); n];
    for (i, &v) in free.iter().enumerate() {
        h[v] = h_free[i].clone();
    }
    Ok(h)
}

/// Expected capture time of the drunk robber against cops that never move.
pub fn stationary_ect<W: Weight>(g: &Graph, cops: &CopConfig, speed: usize) -> Result<W> {
    let h = absorption_times::<W>(g, cops, speed)?;
    Ok(h.into_iter().sum::<W>() / W::from_usize(g.n()))
}
