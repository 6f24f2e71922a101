//! Optimal values for the drunk robber: truncated belief-MDP values (lower
//! bounds), exact strategy evaluations (upper bounds) and the analytic lower
//! bound driven by the `M_t` sequence.

use std::collections::HashMap;

use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::belief::{self, CopSchedule};
use crate::error::{Error, Result};
use crate::game::{all_configs, cop_moves, cop_steps, CopConfig, MoveRule, Rules};
use crate::graph::Graph;
use crate::play::SimRng;
use crate::symmetry::{Symmetry, DEFAULT_GROUP_CAP};
use crate::weight::{fmt_rational, rat, Rational};

/// Distinct `(turn, cops, belief)` states memoized before the solver stops expanding.
pub const DEFAULT_BELIEF_CAP: usize = 500_000;

#[derive(Debug, Clone, PartialEq)]
pub struct DrunkSolution {
    /// Optimal `E[min(T, m)]`; a lower bound on it when `exact` is false.
    pub value: Rational,
    pub exact: bool,
    pub horizon: usize,
    /// Every placement attaining the optimum, sorted.
    pub first_moves: Vec<CopConfig>,
    pub states: usize,
}

type Key = (usize, CopConfig, Vec<Rational>);

struct Dp<'a> {
    g: &'a Graph,
    rules: Rules,
    horizon: usize,
    sym: Symmetry,
    memo: HashMap<Key, Rational>,
    cap: usize,
    truncated: bool,
}

impl Dp<'_> {
    fn key(&self, t: usize, cops: &CopConfig, probs: &[Rational]) -> Key {
        let mut best: Option<(CopConfig, Vec<Rational>)> = None;
        for i in 0..self.sym.len() {
            let perm = self.sym.perm(i);
            let c = self.sym.apply(i, cops);
            let mut p = vec![Rational::zero(); probs.len()];
            for (v, x) in probs.iter().enumerate() {
                p[perm[v]] = x.clone();
            }
            let better = match &best {
                None => true,
                Some((bc, bp)) => (&c, &p) < (bc, bp),
            };
            if better {
                best = Some((c, p));
            }
        }
        let (c, p) = best.expect("group contains the identity");
        (t, c, p)
    }

    /// Expected number of further survived turns, counting turn `t` itself,
    /// given the robber survived turn `t` and the end-of-turn belief `probs`.
    fn survive(&mut self, t: usize, cops: &CopConfig, probs: &[Rational]) -> Result<Rational> {
        if t + 1 >= self.horizon {
            return Ok(Rational::one());
        }
        let key = self.key(t, cops, probs);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        if self.memo.len() >= self.cap {
            self.truncated = true;
            return Ok(Rational::one());
        }
        let prev = belief::Belief {
            probs: probs.to_vec(),
            phase: belief::Phase::EndOfTurn,
            turn: t,
        };
        let mut best: Option<Rational> = None;
        for next in cop_moves(self.g, cops, self.rules.moves) {
            let value = self.after_move(&prev, &next)?;
            if best.as_ref().map_or(true, |b| value < *b) {
                best = Some(value);
            }
        }
        let out = Rational::one() + best.unwrap_or_else(Rational::zero);
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    /// Contribution of the turns after `prev.turn` when the cops move to `next`.
    fn after_move(&mut self, prev: &belief::Belief<Rational>, next: &CopConfig) -> Result<Rational> {
        let cop = belief::step_cop(self.g, prev, next)?;
        let Some(post) = cop.belief else {
            return Ok(Rational::zero());
        };
        let rob = belief::step_robber(self.g, &post, next, self.rules.speed)?;
        let Some(end) = rob.end else {
            return Ok(Rational::zero());
        };
        let alive = (Rational::one() - cop.capture) * (Rational::one() - rob.capture);
        Ok(alive * self.survive(prev.turn + 1, next, &end.probs)?)
    }
}

/// Optimal cop play against the drunk robber in the `m`-turn game with payoff `min(T, m)`.
pub fn val_drunk_truncated(g: &Graph, cops: usize, horizon: usize, rules: Rules, cap: usize) -> Result<DrunkSolution> {
    if cops == 0 {
        return Err(Error::param("at least one cop is required"));
    }
    if rules.speed == 0 {
        return Err(Error::param("robber speed must be at least 1"));
    }
    let placements = all_configs(g.n(), cops);
    if horizon == 0 {
        return Ok(DrunkSolution {
            value: Rational::zero(),
            exact: true,
            horizon,
            first_moves: placements,
            states: 0,
        });
    }
    let mut dp = Dp {
        g,
        rules,
        horizon,
        sym: Symmetry::of_graph(g, DEFAULT_GROUP_CAP),
        memo: HashMap::new(),
        cap,
        truncated: false,
    };
    let mut scored = Vec::with_capacity(placements.len());
    for x0 in placements {
        let init = belief::init_beliefs::<Rational>(g, &x0)?;
        let value = match init.end {
            None => Rational::zero(),
            Some(end) => (Rational::one() - init.capture) * dp.survive(0, &x0, &end.probs)?,
        };
        scored.push((value, x0));
    }
    let value = scored
        .iter()
        .map(|(v, _)| v.clone())
        .min()
        .expect("at least one placement");
    let first_moves = scored.into_iter().filter(|(v, _)| *v == value).map(|(_, c)| c).collect();
    Ok(DrunkSolution {
        value,
        exact: !dp.truncated,
        horizon,
        first_moves,
        states: dp.memo.len(),
    })
}

/// A cop plan whose drunk-robber expected capture time is computed exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum UpperStrategy {
    Stationary(CopConfig),
    /// Follows the schedule, then stays on its final configuration.
    Schedule(CopSchedule),
}

impl UpperStrategy {
    pub fn name(&self) -> String {
        match self {
            UpperStrategy::Stationary(c) => format!("stationary{c}"),
            UpperStrategy::Schedule(s) => format!("schedule[{}]", s.len()),
        }
    }

    pub fn evaluate(&self, g: &Graph, speed: usize) -> Result<Rational> {
        match self {
            UpperStrategy::Stationary(c) => belief::stationary_ect(g, c, speed),
            UpperStrategy::Schedule(s) => schedule_then_stationary(g, s, speed),
        }
    }
}

/// Exact `E(T)` of a schedule continued by standing still on its last configuration.
pub fn schedule_then_stationary(g: &Graph, sched: &CopSchedule, speed: usize) -> Result<Rational> {
    let positions = sched.positions();
    let init = belief::init_beliefs::<Rational>(g, &positions[0])?;
    let mut alive = Rational::one() - init.capture;
    let mut total = Rational::zero();
    let mut belief = init.end;
    // E(T) = sum over t >= 0 of P(T > t)
    for z in positions.iter().skip(1) {
        let Some(prev) = belief.take() else { break };
        total += alive.clone();
        let cop = belief::step_cop(g, &prev, z)?;
        alive *= Rational::one() - cop.capture;
        let Some(post) = cop.belief else { break };
        let rob = belief::step_robber(g, &post, z, speed)?;
        alive *= Rational::one() - rob.capture;
        belief = rob.end;
    }
    if let Some(end) = belief {
        let last = positions.last().expect("schedule is nonempty");
        let h = belief::absorption_times::<Rational>(g, last, speed)?;
        let tail: Rational = end.probs.iter().zip(&h).map(|(p, h)| p.clone() * h.clone()).sum();
        total += alive * tail;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueBracket {
    #[serde(serialize_with = "crate::closed_form::ser_rational")]
    pub lower: Rational,
    /// Truncated-game horizon behind `lower`.
    pub horizon: usize,
    pub lower_exact: bool,
    #[serde(serialize_with = "crate::closed_form::ser_rational")]
    pub upper: Rational,
    pub upper_strategy: String,
}

impl ValueBracket {
    pub fn is_closed(&self) -> bool {
        self.lower == self.upper
    }

    pub fn width(&self) -> Rational {
        self.upper.clone() - self.lower.clone()
    }
}

impl std::fmt::Display for ValueBracket {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", fmt_rational(&self.lower), fmt_rational(&self.upper))
    }
}

pub fn dct_bracket(g: &Graph, cops: usize, horizon: usize, upper: &UpperStrategy, rules: Rules) -> Result<ValueBracket> {
    let lower = val_drunk_truncated(g, cops, horizon, rules, DEFAULT_BELIEF_CAP)?;
    let up = upper.evaluate(g, rules.speed)?;
    Ok(ValueBracket {
        lower: lower.value,
        horizon,
        lower_exact: lower.exact,
        upper: up,
        upper_strategy: upper.name(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcentrationBound {
    /// `ΔK / (δ(n-K))`; the bound needs this to be at most 1/24.
    #[serde(serialize_with = "crate::closed_form::ser_rational")]
    pub ratio: Rational,
    /// `δ(n-K) / (7eΔK)` when the degree condition holds.
    pub bound: Option<f64>,
}

impl ConcentrationBound {
    pub fn applies(&self) -> bool {
        self.bound.is_some()
    }
}

pub fn concentration_lower(g: &Graph, cops: usize) -> Result<ConcentrationBound> {
    let n = g.n();
    if cops == 0 || n <= cops {
        return Err(Error::param(format!("need 1 <= K < n, got K={cops}, n={n}")));
    }
    let m = g.metrics();
    let (big, small) = (m.max_degree as i64, m.min_degree as i64);
    let free = (n - cops) as i64;
    let ratio = rat(big * cops as i64, small * free);
    let bound = (ratio <= rat(1, 24))
        .then(|| (small * free) as f64 / (7.0 * std::f64::consts::E * (big * cops as i64) as f64));
    Ok(ConcentrationBound { ratio, bound })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MTrace {
    #[serde(serialize_with = "ser_rationals")]
    pub m: Vec<Rational>,
    pub condition_ok: bool,
    /// `δ(n-K) / (7ΔK)`: turns before `M_t` can reach `3Δ/(δ(n-K))`.
    pub tau: f64,
}

fn ser_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&fmt_rational(r))?;
    }
    seq.end()
}

/// `M_0 = Δ/(δ(n-K))`, `M_t = M_{t-1}/(1 - 2K M_{t-1})`, up to `t_max` or until
/// the recursion stops being positive.
pub fn m_trace(g: &Graph, cops: usize, t_max: usize) -> Result<MTrace> {
    let l = concentration_lower(g, cops)?;
    let m = g.metrics();
    let (big, small) = (m.max_degree as i64, m.min_degree as i64);
    let free = (g.n() - cops) as i64;
    let two_k = rat(2 * cops as i64, 1);
    let mut seq = vec![rat(big, small * free)];
    while seq.len() <= t_max {
        let prev = seq.last().expect("nonempty").clone();
        let denom = Rational::one() - two_k.clone() * prev.clone();
        if denom <= Rational::zero() {
            break;
        }
        seq.push(prev / denom);
    }
    Ok(MTrace {
        m: seq,
        condition_ok: l.applies(),
        tau: (small * free) as f64 / (7.0 * (big * cops as i64) as f64),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub turn: usize,
    pub vertex: usize,
    pub value: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BeliefEnvelopeReport {
    /// Turns at which all three beliefs were compared with `M_t deg(v)/Δ`.
    pub turns_checked: usize,
    pub violations: Vec<Violation>,
}

/// Checks `max(p̄_t(v), p̂_t(v), p_t(v)) <= M_t deg(v)/Δ` along a schedule for as
/// long as `M_t` is defined and the robber survives.
pub fn check_belief_envelope(g: &Graph, sched: &CopSchedule) -> Result<BeliefEnvelopeReport> {
    let positions = sched.positions();
    let cops = positions[0].len();
    let trace = m_trace(g, cops, positions.len())?;
    let delta = g.metrics().max_degree as f64;
    let bound = |t: usize, v: usize| trace.m[t].to_f64().unwrap_or(f64::INFINITY) * g.degree(v) as f64 / delta;
    let mut violations = Vec::new();
    let check = |t: usize, probs: &[f64], violations: &mut Vec<Violation>| {
        for (v, &p) in probs.iter().enumerate() {
            let b = bound(t, v);
            if p > b + 1e-12 {
                violations.push(Violation {
                    turn: t,
                    vertex: v,
                    value: p,
                    bound: b,
                });
            }
        }
    };
    let init = belief::init_beliefs::<f64>(g, &positions[0])?;
    check(0, &init.placed.probs, &mut violations);
    let mut turns_checked = 1;
    let Some(mut prev) = init.end else {
        return Ok(BeliefEnvelopeReport { turns_checked, violations });
    };
    check(0, &prev.probs, &mut violations);
    for (t, z) in positions.iter().enumerate().skip(1) {
        if t >= trace.m.len() {
            break;
        }
        let cop = belief::step_cop(g, &prev, z)?;
        let Some(post) = cop.belief else { break };
        check(t, &post.probs, &mut violations);
        let rob = belief::step_robber(g, &post, z, 1)?;
        check(t, &rob.moved.probs, &mut violations);
        turns_checked += 1;
        let Some(end) = rob.end else { break };
        check(t, &end.probs, &mut violations);
        prev = end;
    }
    Ok(BeliefEnvelopeReport { turns_checked, violations })
}

/// A uniformly random lazy cop trajectory of `len` configurations.
pub fn random_schedule(g: &Graph, cops: usize, len: usize, rng: &mut SimRng) -> Result<CopSchedule> {
    if len == 0 || cops == 0 {
        return Err(Error::param("random schedule needs at least one cop and one turn"));
    }
    let mut cur: Vec<usize> = (0..cops).map(|_| rng.gen_range(0..g.n())).collect();
    let mut positions = vec![CopConfig::new(cur.clone())];
    for _ in 1..len {
        for v in cur.iter_mut() {
            let steps = cop_steps(g, *v, MoveRule::Lazy);
            *v = steps[rng.gen_range(0..steps.len())];
        }
        positions.push(CopConfig::new(cur.clone()));
    }
    CopSchedule::new(g, positions, MoveRule::Lazy)
}
