//! Behavioral strategies, game rollouts, exact pair evaluation, and best responses.
//!
//! A strategy exposes its randomization as explicit distributions (`start`,
//! `next`, `place`, `respond`) so the same object drives Monte Carlo sampling,
//! exact forward enumeration, and best-response recursions. Strategies whose
//! branching is too wide to enumerate cheaply override the `sample_*` methods.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{
    all_configs, check_cop_move, cop_moves, robber_can_reach, robber_moves, CopConfig, MoveRule,
    Rules,
};
use crate::graph::Graph;

pub type SimRng = ChaCha8Rng;

/// Distribution over `(probability, move, next state)` triples.
pub type Dist<M, S> = Vec<(f64, M, S)>;

pub trait CopStrategy: Send + Sync {
    type State: Clone + Eq + Hash + Debug + Send + Sync;

    fn name(&self) -> String;

    fn cops(&self) -> usize;

    fn start(&self, g: &Graph) -> Result<Dist<CopConfig, Self::State>>;

    fn next(
        &self,
        g: &Graph,
        current: &CopConfig,
        state: &Self::State,
    ) -> Result<Dist<CopConfig, Self::State>>;

    fn sample_start(&self, g: &Graph, rng: &mut SimRng) -> Result<(CopConfig, Self::State)> {
        Ok(pick(self.start(g)?, rng))
    }

    fn sample_next(
        &self,
        g: &Graph,
        current: &CopConfig,
        state: &Self::State,
        rng: &mut SimRng,
    ) -> Result<(CopConfig, Self::State)> {
        Ok(pick(self.next(g, current, state)?, rng))
    }

    /// Zero-based index of the round the strategy is in, for round-based strategies.
    fn round(&self, _state: &Self::State) -> Option<usize> {
        None
    }
}

pub trait RobberStrategy: Send + Sync {
    type State: Clone + Eq + Hash + Debug + Send + Sync;

    fn name(&self) -> String;

    fn place(&self, g: &Graph, cops: &CopConfig) -> Result<Dist<usize, Self::State>>;

    /// Reply after the cops moved to `cops`; a destination on a cop vertex is a capture.
    fn respond(
        &self,
        g: &Graph,
        cops: &CopConfig,
        robber: usize,
        state: &Self::State,
    ) -> Result<Dist<usize, Self::State>>;

    fn sample_place(&self, g: &Graph, cops: &CopConfig, rng: &mut SimRng) -> Result<(usize, Self::State)> {
        Ok(pick(self.place(g, cops)?, rng))
    }

    fn sample_respond(
        &self,
        g: &Graph,
        cops: &CopConfig,
        robber: usize,
        state: &Self::State,
        rng: &mut SimRng,
    ) -> Result<(usize, Self::State)> {
        Ok(pick(self.respond(g, cops, robber, state)?, rng))
    }

    /// Random-walk robbers move regardless of the lazy rule.
    fn is_drunk(&self) -> bool {
        false
    }
}

/// Draws from a finite distribution (the last entry absorbs rounding).
pub fn pick<M, S>(dist: Dist<M, S>, rng: &mut SimRng) -> (M, S) {
    assert!(!dist.is_empty(), "strategy returned an empty distribution");
    let mut u: f64 = rng.gen();
    let last = dist.len() - 1;
    for (i, (p, m, s)) in dist.into_iter().enumerate() {
        if u < p || i == last {
            return (m, s);
        }
        u -= p;
    }
    unreachable!()
}

/// Deterministic per-trial generator: one ChaCha stream per trial index.
pub fn trial_rng(seed: u64, trial: usize) -> SimRng {
    let mut rng = SimRng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn check_robber_move(
    g: &Graph,
    from: usize,
    to: usize,
    cops: &CopConfig,
    rules: Rules,
    drunk: bool,
    turn: usize,
) -> Result<()> {
    let rule = if drunk { MoveRule::Forced } else { rules.moves };
    let ok = to < g.n()
        && if rules.speed == 1 {
            g.has_edge(from, to) || (from == to && rule == MoveRule::Lazy)
        } else {
            robber_can_reach(g, from, to, cops, rules.speed, rule)
        };
    if ok {
        Ok(())
    } else {
        Err(Error::Infeasible {
            turn,
            detail: format!("robber cannot move from {from} to {to}"),
        })
    }
}

fn check_cops(g: &Graph, from: &CopConfig, to: &CopConfig, rules: Rules, turn: usize) -> Result<()> {
    if from.len() == 1 && to.len() == 1 {
        let (a, b) = (from.as_slice()[0], to.as_slice()[0]);
        if b < g.n() && (g.has_edge(a, b) || (a == b && rules.moves == MoveRule::Lazy)) {
            return Ok(());
        }
    }
    check_cop_move(g, from, to, rules.moves, turn)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TrialOutcome {
    pub capture_time: usize,
    /// Rounds started by a round-based cop strategy up to and including capture.
    pub rounds: Option<usize>,
}

/// Plays one game to capture, failing if it lasts more than `max_turns` turns.
pub fn play_trial<C: CopStrategy, R: RobberStrategy>(
    g: &Graph,
    cop: &C,
    robber: &R,
    rules: Rules,
    max_turns: usize,
    rng: &mut SimRng,
) -> Result<Option<TrialOutcome>> {
    let (mut x, mut cs) = cop.sample_start(g, rng)?;
    if x.len() != cop.cops() {
        return Err(Error::Infeasible {
            turn: 0,
            detail: format!("expected {} cops, got {}", cop.cops(), x.len()),
        });
    }
    let (mut y, mut rs) = robber.sample_place(g, &x, rng)?;
    let done = |t: usize, cs: &C::State| {
        Some(TrialOutcome {
            capture_time: t,
            rounds: cop.round(cs).map(|r| r + 1),
        })
    };
    if x.contains(y) {
        return Ok(done(0, &cs));
    }
    for t in 1..=max_turns {
        let (nx, ncs) = cop.sample_next(g, &x, &cs, rng)?;
        check_cops(g, &x, &nx, rules, t)?;
        x = nx;
        cs = ncs;
        if x.contains(y) {
            return Ok(done(t, &cs));
        }
        let (ny, nrs) = robber.sample_respond(g, &x, y, &rs, rng)?;
        check_robber_move(g, y, ny, &x, rules, robber.is_drunk(), t)?;
        y = ny;
        rs = nrs;
        if x.contains(y) {
            return Ok(done(t, &cs));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub trials: usize,
    pub seed: u64,
    pub max_turns: usize,
}

impl McConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        McConfig {
            trials,
            seed,
            max_turns: 1_000_000,
        }
    }
}

/// Summary of a batch of rollouts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McReport {
    pub trials: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub std_err: f64,
    pub ci95: (f64, f64),
    pub max: usize,
    /// `(capture turn, count)` pairs in increasing turn order.
    pub histogram: Vec<(usize, usize)>,
    /// Total rounds used across trials, for round-based cop strategies.
    pub rounds: Option<usize>,
}

impl McReport {
    pub fn from_outcomes(outcomes: &[TrialOutcome]) -> Self {
        let k = outcomes.len() as f64;
        let mean = outcomes.iter().map(|o| o.capture_time as f64).sum::<f64>() / k;
        let var = if outcomes.len() > 1 {
            outcomes
                .iter()
                .map(|o| (o.capture_time as f64 - mean).powi(2))
                .sum::<f64>()
                / (k - 1.0)
        } else {
            0.0
        };
        let std_dev = var.sqrt();
        let std_err = std_dev / k.sqrt();
        let mut hist = BTreeMap::new();
        for o in outcomes {
            *hist.entry(o.capture_time).or_insert(0) += 1;
        }
        let rounds = outcomes
            .iter()
            .map(|o| o.rounds)
            .sum::<Option<usize>>();
        McReport {
            trials: outcomes.len(),
            mean,
            std_dev,
            std_err,
            ci95: (mean - 1.96 * std_err, mean + 1.96 * std_err),
            max: outcomes.iter().map(|o| o.capture_time).max().unwrap_or(0),
            histogram: hist.into_iter().collect(),
            rounds,
        }
    }

    pub fn ci_contains(&self, x: f64) -> bool {
        self.ci95.0 <= x && x <= self.ci95.1
    }

    /// Captures per round (each round is a Bernoulli trial), if rounds were tracked.
    pub fn per_round_rate(&self) -> Option<f64> {
        self.rounds.map(|r| self.trials as f64 / r as f64)
    }
}

/// Runs `cfg.trials` independent games in parallel; the result does not depend
/// on the number of worker threads.
pub fn monte_carlo<C: CopStrategy, R: RobberStrategy>(
    g: &Graph,
    cop: &C,
    robber: &R,
    rules: Rules,
    cfg: McConfig,
) -> Result<McReport> {
    if cfg.trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    let outcomes = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(cfg.seed, trial);
            play_trial(g, cop, robber, rules, cfg.max_turns, &mut rng)?.ok_or(Error::Censored {
                trial,
                max_turns: cfg.max_turns,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(McReport::from_outcomes(&outcomes))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairValue {
    /// `E(min(T, horizon))`.
    pub expected: f64,
    /// Probability of surviving the whole horizon.
    pub residual: f64,
}

impl PairValue {
    /// Whether `expected` is the untruncated `E(T)`.
    pub fn capture_certain(&self) -> bool {
        self.residual <= 1e-12
    }
}

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// Exact `E(min(T, horizon))` by forward enumeration of joint states.
pub fn evaluate_pair<C: CopStrategy, R: RobberStrategy>(
    g: &Graph,
    cop: &C,
    robber: &R,
    rules: Rules,
    horizon: usize,
) -> Result<PairValue> {
    type Key<A, B> = (CopConfig, A, usize, B);
    let mut states: IndexMap<Key<C::State, R::State>, f64> = IndexMap::new();
    let mut expected = 0.0;
    if horizon == 0 {
        return Ok(PairValue {
            expected: 0.0,
            residual: 0.0,
        });
    }
    for (p, x, cs) in cop.start(g)? {
        for (q, y, rs) in robber.place(g, &x)? {
            if !x.contains(y) {
                *states.entry((x.clone(), cs.clone(), y, rs)).or_insert(0.0) += p * q;
            }
        }
    }
    for t in 1..horizon {
        let mut next: IndexMap<Key<C::State, R::State>, f64> = IndexMap::new();
        for ((x, cs, y, rs), w) in states {
            for (p, nx, ncs) in cop.next(g, &x, &cs)? {
                check_cops(g, &x, &nx, rules, t)?;
                if nx.contains(y) {
                    expected += t as f64 * w * p;
                    continue;
                }
                for (q, ny, nrs) in robber.respond(g, &nx, y, &rs)? {
                    check_robber_move(g, y, ny, &nx, rules, robber.is_drunk(), t)?;
                    if nx.contains(ny) {
                        expected += t as f64 * w * p * q;
                    } else {
                        *next.entry((nx.clone(), ncs.clone(), ny, nrs)).or_insert(0.0) += w * p * q;
                    }
                }
            }
        }
        if next.len() > DEFAULT_STATE_CAP {
            return Err(Error::TooLarge {
                what: "joint strategy state set",
                size: next.len(),
                cap: DEFAULT_STATE_CAP,
            });
        }
        states = next;
    }
    let residual: f64 = states.values().sum();
    Ok(PairValue {
        expected: expected + horizon as f64 * residual,
        residual,
    })
}

/// Value of the robber's best response and its placement choice per cop start.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestResponse {
    pub value: f64,
    /// Best robber placement for each possible cop placement.
    pub placements: Vec<(CopConfig, Option<usize>)>,
}

type BeliefKey<S> = Vec<(S, u64)>;

fn belief_key<S: Clone>(b: &IndexMap<S, f64>) -> BeliefKey<S> {
    b.iter()
        .map(|(s, p)| (s.clone(), (p * 1e12).round() as u64))
        .collect()
}

struct RobberSearch<'a, C: CopStrategy> {
    g: &'a Graph,
    cop: &'a C,
    rules: Rules,
    horizon: usize,
    next_cache: HashMap<(CopConfig, C::State), Dist<CopConfig, C::State>>,
    memo: HashMap<(usize, CopConfig, BeliefKey<C::State>, usize), f64>,
}

impl<C: CopStrategy> RobberSearch<'_, C> {
    fn cop_next(&mut self, x: &CopConfig, s: &C::State) -> Result<Dist<CopConfig, C::State>> {
        let key = (x.clone(), s.clone());
        if let Some(d) = self.next_cache.get(&key) {
            return Ok(d.clone());
        }
        let d = self.cop.next(self.g, x, s)?;
        self.next_cache.insert(key, d.clone());
        Ok(d)
    }

    /// Robber sits at `y` having survived turn `t`; cops at `x` with belief `b`.
    fn after_turn(&mut self, t: usize, x: &CopConfig, b: &IndexMap<C::State, f64>, y: usize) -> Result<f64> {
        if t + 1 >= self.horizon {
            return Ok(self.horizon as f64);
        }
        let key = (t, x.clone(), belief_key(b), y);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let mut by_move: IndexMap<CopConfig, IndexMap<C::State, f64>> = IndexMap::new();
        for (s, w) in b {
            for (p, nx, ns) in self.cop_next(x, s)? {
                check_cops(self.g, x, &nx, self.rules, t + 1)?;
                *by_move.entry(nx).or_default().entry(ns).or_insert(0.0) += w * p;
            }
        }
        let mut value = 0.0;
        for (nx, nb) in by_move {
            let mass: f64 = nb.values().sum();
            if mass <= 0.0 {
                continue;
            }
            if nx.contains(y) {
                value += mass * (t + 1) as f64;
                continue;
            }
            let nb: IndexMap<C::State, f64> = nb.into_iter().map(|(s, w)| (s, w / mass)).collect();
            value += mass * self.robber_turn(t + 1, &nx, &nb, y)?;
        }
        self.memo.insert(key, value);
        Ok(value)
    }

    fn robber_turn(&mut self, t: usize, x: &CopConfig, b: &IndexMap<C::State, f64>, y: usize) -> Result<f64> {
        let options = robber_moves(self.g, y, x, self.rules.speed, self.rules.moves);
        let mut best: Option<f64> = None;
        for z in options {
            let v = self.after_turn(t, x, b, z)?;
            if best.map_or(true, |b| v > b + 1e-12) {
                best = Some(v);
            }
        }
        Ok(best.unwrap_or(t as f64))
    }
}

/// Exact value of the best adversarial robber against `cop` in the game
/// truncated at `horizon` (ties broken toward the lowest vertex).
pub fn best_response_value<C: CopStrategy>(
    g: &Graph,
    cop: &C,
    rules: Rules,
    horizon: usize,
) -> Result<BestResponse> {
    let mut placements = Vec::new();
    if horizon == 0 {
        return Ok(BestResponse {
            value: 0.0,
            placements,
        });
    }
    let mut by_start: IndexMap<CopConfig, IndexMap<C::State, f64>> = IndexMap::new();
    for (p, x, s) in cop.start(g)? {
        *by_start.entry(x).or_default().entry(s).or_insert(0.0) += p;
    }
    by_start.sort_keys();
    let mut search = RobberSearch {
        g,
        cop,
        rules,
        horizon,
        next_cache: HashMap::new(),
        memo: HashMap::new(),
    };
    let mut value = 0.0;
    for (x, b) in by_start {
        let mass: f64 = b.values().sum();
        let b: IndexMap<C::State, f64> = b.into_iter().map(|(s, w)| (s, w / mass)).collect();
        let mut best: Option<(f64, usize)> = None;
        for y in (0..g.n()).filter(|&y| !x.contains(y)) {
            let v = search.after_turn(0, &x, &b, y)?;
            if best.map_or(true, |(bv, _)| v > bv + 1e-12) {
                best = Some((v, y));
            }
        }
        value += mass * best.map_or(0.0, |(v, _)| v);
        placements.push((x, best.map(|(_, y)| y)));
    }
    Ok(BestResponse { value, placements })
}

type Crowd<S> = IndexMap<(usize, S), f64>;

struct CopSearch<'a, R: RobberStrategy> {
    g: &'a Graph,
    robber: &'a R,
    rules: Rules,
    horizon: usize,
    memo: HashMap<(usize, CopConfig, Vec<((usize, R::State), u64)>), f64>,
}

impl<R: RobberStrategy> CopSearch<'_, R> {
    /// Expected payoff contributed by the surviving robber mass `crowd` after turn `t`.
    fn after_turn(&mut self, t: usize, x: &CopConfig, crowd: &Crowd<R::State>) -> Result<f64> {
        let alive: f64 = crowd.values().sum();
        if alive <= 0.0 {
            return Ok(0.0);
        }
        if t + 1 >= self.horizon {
            return Ok(self.horizon as f64 * alive);
        }
        let key = (t, x.clone(), belief_key(crowd));
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let mut best = f64::INFINITY;
        for nx in cop_moves(self.g, x, self.rules.moves) {
            let mut value = 0.0;
            let mut next: Crowd<R::State> = IndexMap::new();
            for ((y, s), w) in crowd {
                if nx.contains(*y) {
                    value += (t + 1) as f64 * w;
                    continue;
                }
                for (q, ny, ns) in self.robber.respond(self.g, &nx, *y, s)? {
                    if nx.contains(ny) {
                        value += (t + 1) as f64 * w * q;
                    } else {
                        *next.entry((ny, ns)).or_insert(0.0) += w * q;
                    }
                }
            }
            value += self.after_turn(t + 1, &nx, &next)?;
            if value < best - 1e-12 {
                best = value;
            }
        }
        self.memo.insert(key, best);
        Ok(best)
    }
}

/// Exact value of the best cop response (with `cops` cops) to a robber strategy.
pub fn cop_best_response<R: RobberStrategy>(
    g: &Graph,
    cops: usize,
    robber: &R,
    rules: Rules,
    horizon: usize,
) -> Result<f64> {
    if horizon == 0 {
        return Ok(0.0);
    }
    let mut search = CopSearch {
        g,
        robber,
        rules,
        horizon,
        memo: HashMap::new(),
    };
    let mut best = f64::INFINITY;
    for x in all_configs(g.n(), cops) {
        let mut crowd: Crowd<R::State> = IndexMap::new();
        for (q, y, s) in robber.place(g, &x)? {
            if !x.contains(y) {
                *crowd.entry((y, s)).or_insert(0.0) += q;
            }
        }
        let v = search.after_turn(0, &x, &crowd)?;
        if v < best - 1e-12 {
            best = v;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    /// Cop that walks a fixed vertex list and then stays.
    struct Walker(Vec<usize>);

    impl CopStrategy for Walker {
        type State = usize;
        fn name(&self) -> String {
            "walker".into()
        }
        fn cops(&self) -> usize {
            1
        }
        fn start(&self, _g: &Graph) -> Result<Dist<CopConfig, usize>> {
            Ok(vec![(1.0, CopConfig::single(self.0[0]), 0)])
        }
        fn next(&self, _g: &Graph, _c: &CopConfig, s: &usize) -> Result<Dist<CopConfig, usize>> {
            let i = (*s + 1).min(self.0.len() - 1);
            Ok(vec![(1.0, CopConfig::single(self.0[i]), i)])
        }
    }

    /// Robber that stays where the cop started.
    struct Suicidal;

    impl RobberStrategy for Suicidal {
        type State = ();
        fn name(&self) -> String {
            "suicidal".into()
        }
        fn place(&self, _g: &Graph, cops: &CopConfig) -> Result<Dist<usize, ()>> {
            Ok(vec![(1.0, cops.as_slice()[0], ())])
        }
        fn respond(&self, _g: &Graph, _c: &CopConfig, y: usize, _s: &()) -> Result<Dist<usize, ()>> {
            Ok(vec![(1.0, y, ())])
        }
    }

    #[test]
    fn robber_on_cop_start_is_caught_immediately() {
        let g = graph::path(4).unwrap();
        let v = evaluate_pair(&g, &Walker(vec![0, 1, 2, 3]), &Suicidal, Rules::default(), 10).unwrap();
        assert_eq!(v.expected, 0.0);
        assert!(v.capture_certain());
    }

    #[test]
    fn path_sweep_best_response() {
        for n in 2..7 {
            let g = graph::path(n).unwrap();
            let cop = Walker((0..n).collect());
            let br = best_response_value(&g, &cop, Rules::default(), n + 2).unwrap();
            assert!((br.value - (n - 1) as f64).abs() < 1e-12, "n={n}: {}", br.value);
            assert_eq!(br.placements.len(), 1);
        }
    }

    #[test]
    fn truncation_pays_horizon() {
        let g = graph::path(5).unwrap();
        let cop = Walker(vec![0]);
        let br = best_response_value(&g, &cop, Rules::default(), 3).unwrap();
        assert_eq!(br.value, 3.0);
    }

    #[test]
    fn cop_response_to_static_robber() {
        let g = graph::path(3).unwrap();
        assert_eq!(cop_best_response(&g, 1, &Suicidal, Rules::default(), 4).unwrap(), 0.0);
    }

    #[test]
    fn per_trial_streams_are_reproducible() {
        let mut a = trial_rng(7, 3);
        let mut b = trial_rng(7, 3);
        let mut c = trial_rng(7, 4);
        let (x, y, z): (u64, u64, u64) = (a.gen(), b.gen(), c.gen());
        assert_eq!(x, y);
        assert_ne!(x, z);
    }

    #[test]
    fn report_statistics() {
        let outcomes: Vec<_> = [1, 2, 3, 2]
            .iter()
            .map(|&t| TrialOutcome {
                capture_time: t,
                rounds: Some(1),
            })
            .collect();
        let r = McReport::from_outcomes(&outcomes);
        assert_eq!(r.mean, 2.0);
        assert_eq!(r.max, 3);
        assert_eq!(r.histogram, vec![(1, 1), (2, 2), (3, 1)]);
        assert_eq!(r.per_round_rate(), Some(1.0));
        assert!(r.ci_contains(2.0));
    }
}
