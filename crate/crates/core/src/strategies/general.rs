use rand::Rng;

use crate::belief;
use crate::error::{Error, Result};
use crate::game::{cop_steps, robber_moves, CopConfig, MoveRule};
use crate::graph::{Family, Graph};
use crate::play::{CopStrategy, Dist, RobberStrategy, SimRng};
use crate::visible::{VisibleSolution, DEFAULT_STATE_CAP};

/// Cops that never move.
#[derive(Debug, Clone)]
pub struct StationaryCop {
    cops: CopConfig,
}

impl StationaryCop {
    pub fn new(g: &Graph, cops: CopConfig) -> Result<Self> {
        if cops.is_empty() || cops.iter().any(|&v| v >= g.n()) {
            return Err(Error::param(format!("invalid stationary set {cops}")));
        }
        Ok(StationaryCop { cops })
    }

    pub fn config(&self) -> &CopConfig {
        &self.cops
    }
}

impl CopStrategy for StationaryCop {
    type State = ();

    fn name(&self) -> String {
        format!("stationary{}", self.cops)
    }

    fn cops(&self) -> usize {
        self.cops.len()
    }

    fn start(&self, _g: &Graph) -> Result<Dist<CopConfig, ()>> {
        Ok(vec![(1.0, self.cops.clone(), ())])
    }

    fn next(&self, _g: &Graph, _c: &CopConfig, _s: &()) -> Result<Dist<CopConfig, ()>> {
        Ok(vec![(1.0, self.cops.clone(), ())])
    }
}

/// Cops following a fixed list of configurations, staying on the last one.
#[derive(Debug, Clone)]
pub struct ScheduleCop {
    positions: Vec<CopConfig>,
}

impl ScheduleCop {
    pub fn new(schedule: &belief::CopSchedule) -> Self {
        ScheduleCop {
            positions: schedule.positions().to_vec(),
        }
    }
}

impl CopStrategy for ScheduleCop {
    type State = usize;

    fn name(&self) -> String {
        "schedule".into()
    }

    fn cops(&self) -> usize {
        self.positions[0].len()
    }

    fn start(&self, _g: &Graph) -> Result<Dist<CopConfig, usize>> {
        Ok(vec![(1.0, self.positions[0].clone(), 0)])
    }

    fn next(&self, _g: &Graph, _c: &CopConfig, s: &usize) -> Result<Dist<CopConfig, usize>> {
        let i = (*s + 1).min(self.positions.len() - 1);
        Ok(vec![(1.0, self.positions[i].clone(), i)])
    }
}

/// One cop bouncing between the two ends of a path, starting at vertex 0.
#[derive(Debug, Clone)]
pub struct PathSweepCop {
    n: usize,
}

impl PathSweepCop {
    pub fn new(g: &Graph) -> Result<Self> {
        match *g.family() {
            Family::Path { n } => Ok(PathSweepCop { n }),
            _ => Err(Error::not_applicable("path-sweep", format!("{} is not a path", g.label()))),
        }
    }

    /// The single forward pass `0, 1, ..., n-1` as a schedule.
    pub fn schedule(&self, g: &Graph) -> Result<belief::CopSchedule> {
        belief::CopSchedule::single(g, &(0..self.n).collect::<Vec<_>>())
    }
}

impl CopStrategy for PathSweepCop {
    /// `true` while heading toward the far end.
    type State = bool;

    fn name(&self) -> String {
        "path-sweep".into()
    }

    fn cops(&self) -> usize {
        1
    }

    fn start(&self, _g: &Graph) -> Result<Dist<CopConfig, bool>> {
        Ok(vec![(1.0, CopConfig::single(0), true)])
    }

    fn next(&self, _g: &Graph, current: &CopConfig, forward: &bool) -> Result<Dist<CopConfig, bool>> {
        let v = current.as_slice()[0];
        if self.n == 1 {
            return Ok(vec![(1.0, current.clone(), true)]);
        }
        let (w, dir) = match (*forward, v) {
            (true, v) if v + 1 < self.n => (v + 1, true),
            (true, v) => (v - 1, false),
            (false, 0) => (1, true),
            (false, v) => (v - 1, false),
        };
        Ok(vec![(1.0, CopConfig::single(w), dir)])
    }
}

/// Two cops leaving vertex 0 in opposite directions until they meet, then
/// retracing their steps. Reconstructed strategy for cycles.
#[derive(Debug, Clone)]
pub struct CycleDoubleSweepCop {
    n: usize,
}

impl CycleDoubleSweepCop {
    pub fn new(g: &Graph) -> Result<Self> {
        match *g.family() {
            Family::Cycle { n } => Ok(CycleDoubleSweepCop { n }),
            _ => Err(Error::not_applicable(
                "cycle-double-sweep",
                format!("{} is not a cycle", g.label()),
            )),
        }
    }

    fn at(&self, k: usize) -> CopConfig {
        CopConfig::new(vec![k % self.n, (self.n - k % self.n) % self.n])
    }
}

impl CopStrategy for CycleDoubleSweepCop {
    /// `(step from the start, moving outward)`.
    type State = (usize, bool);

    fn name(&self) -> String {
        "cycle-double-sweep".into()
    }

    fn cops(&self) -> usize {
        2
    }

    fn start(&self, _g: &Graph) -> Result<Dist<CopConfig, (usize, bool)>> {
        Ok(vec![(1.0, self.at(0), (0, true))])
    }

    fn next(&self, _g: &Graph, _c: &CopConfig, s: &(usize, bool)) -> Result<Dist<CopConfig, (usize, bool)>> {
        let half = self.n / 2;
        let (k, out) = *s;
        let (k, out) = match (out, k) {
            (true, k) if k < half => (k + 1, true),
            (true, k) => (k - 1, false),
            (false, 0) => (1, true),
            (false, k) => (k - 1, false),
        };
        Ok(vec![(1.0, self.at(k), (k, out))])
    }
}

/// Two cops parked at the top-right and bottom-left corners of an `N x N` grid.
pub fn grid_stationary_cops(g: &Graph, cops: usize) -> Result<StationaryCop> {
    let Family::Grid { side } = *g.family() else {
        return Err(Error::not_applicable(
            "grid-stationary",
            format!("{} is not a square grid", g.label()),
        ));
    };
    if cops != 2 {
        return Err(Error::not_applicable(
            "grid-stationary",
            format!("needs exactly two cops, got {cops}"),
        ));
    }
    StationaryCop::new(g, CopConfig::new(vec![side - 1, side * (side - 1)]))
}

/// Every cop steps to a uniformly random neighbor each turn.
#[derive(Debug, Clone)]
pub struct RandomWalkCop {
    start: CopConfig,
}

impl RandomWalkCop {
    pub fn new(g: &Graph, start: CopConfig) -> Result<Self> {
        StationaryCop::new(g, start.clone())?;
        Ok(RandomWalkCop { start })
    }
}

impl CopStrategy for RandomWalkCop {
    type State = ();

    fn name(&self) -> String {
        "random-walk".into()
    }

    fn cops(&self) -> usize {
        self.start.len()
    }

    fn start(&self, _g: &Graph) -> Result<Dist<CopConfig, ()>> {
        Ok(vec![(1.0, self.start.clone(), ())])
    }

    fn next(&self, g: &Graph, current: &CopConfig, _s: &()) -> Result<Dist<CopConfig, ()>> {
        let mut out: Vec<(f64, Vec<usize>)> = vec![(1.0, Vec::new())];
        for &v in current.iter() {
            let steps = cop_steps(g, v, MoveRule::Forced);
            let p = 1.0 / steps.len() as f64;
            out = out
                .into_iter()
                .flat_map(|(q, prefix)| {
                    steps.iter().map(move |&w| {
                        let mut next = prefix.clone();
                        next.push(w);
                        (q * p, next)
                    })
                })
                .collect();
        }
        let mut merged: indexmap::IndexMap<CopConfig, f64> = indexmap::IndexMap::new();
        for (p, cfg) in out {
            *merged.entry(CopConfig::new(cfg)).or_insert(0.0) += p;
        }
        Ok(merged.into_iter().map(|(c, p)| (p, c, ())).collect())
    }

    fn sample_next(&self, g: &Graph, current: &CopConfig, _s: &(), rng: &mut SimRng) -> Result<(CopConfig, ())> {
        let next = current
            .iter()
            .map(|&v| {
                let steps = cop_steps(g, v, MoveRule::Forced);
                steps[rng.gen_range(0..steps.len())]
            })
            .collect();
        Ok((CopConfig::new(next), ()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RoundPhase {
    /// Playing the visible-game reply to a guessed robber trajectory.
    Guess { robber: usize, left: usize },
    /// Walking back to the optimal visible-game start.
    Return,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GuessChaseState {
    pub round: usize,
    pub phase: RoundPhase,
}

/// Round-based cop team: from the optimal visible-game start, guess the robber's
/// vertex, then for `T̂` steps guess each robber move and answer it optimally;
/// walk back to the start and repeat.
#[derive(Debug, Clone)]
pub struct GuessChaseCop {
    solution: VisibleSolution,
    home: CopConfig,
    t_hat: usize,
}

impl GuessChaseCop {
    pub fn new(g: &Graph, cops: usize) -> Result<Self> {
        let solution = VisibleSolution::solve(g, cops, MoveRule::Lazy, DEFAULT_STATE_CAP)?;
        let res = solution.result().clone();
        match (res.optimal_start, res.t_hat) {
            (Some(home), Some(t_hat)) => Ok(GuessChaseCop {
                solution,
                home,
                t_hat,
            }),
            _ => Err(Error::not_applicable(
                "guess-and-chase",
                format!("{cops} cops cannot catch a visible robber on {}", g.label()),
            )),
        }
    }

    pub fn t_hat(&self) -> usize {
        self.t_hat
    }

    pub fn home(&self) -> &CopConfig {
        &self.home
    }

    /// Uniform guess of the robber's vertex among cop-free vertices at round start.
    fn opening(&self, g: &Graph, round: usize) -> Vec<(f64, GuessChaseState)> {
        let free: Vec<usize> = (0..g.n()).filter(|&v| !self.home.contains(v)).collect();
        if free.is_empty() || self.t_hat == 0 {
            return vec![(1.0, GuessChaseState { round, phase: RoundPhase::Return })];
        }
        let p = 1.0 / free.len() as f64;
        free.into_iter()
            .map(|robber| {
                (
                    p,
                    GuessChaseState {
                        round,
                        phase: RoundPhase::Guess {
                            robber,
                            left: self.t_hat,
                        },
                    },
                )
            })
            .collect()
    }

    fn guess_step(&self, g: &Graph, current: &CopConfig, robber: usize, left: usize, round: usize) -> Dist<CopConfig, GuessChaseState> {
        let reply = self.solution.best_reply(current, robber);
        if left == 1 {
            return vec![(
                1.0,
                reply,
                GuessChaseState {
                    round,
                    phase: RoundPhase::Return,
                },
            )];
        }
        let mut options = robber_moves(g, robber, &reply, 1, MoveRule::Lazy);
        if options.is_empty() {
            options.push(robber);
        }
        let p = 1.0 / options.len() as f64;
        options
            .into_iter()
            .map(|r| {
                (
                    p,
                    reply.clone(),
                    GuessChaseState {
                        round,
                        phase: RoundPhase::Guess {
                            robber: r,
                            left: left - 1,
                        },
                    },
                )
            })
            .collect()
    }

    /// One step of every cop toward the home configuration (best assignment).
    fn step_home(&self, g: &Graph, current: &CopConfig) -> CopConfig {
        let from = current.as_slice();
        let to = self.home.as_slice();
        let mut best: Option<(usize, usize, Vec<usize>)> = None;
        let mut perm: Vec<usize> = (0..to.len()).collect();
        permutations(&mut perm, 0, &mut |p| {
            let dists: Vec<usize> = p.iter().enumerate().map(|(i, &j)| g.distance(from[i], to[j])).collect();
            let key = (*dists.iter().max().unwrap_or(&0), dists.iter().sum::<usize>());
            if best.as_ref().map_or(true, |(m, s, _)| key < (*m, *s)) {
                best = Some((key.0, key.1, p.to_vec()));
            }
        });
        let (_, _, assign) = best.expect("at least one assignment");
        CopConfig::new(
            assign
                .iter()
                .enumerate()
                .map(|(i, &j)| g.step_toward(from[i], to[j]))
                .collect(),
        )
    }
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

impl CopStrategy for GuessChaseCop {
    type State = GuessChaseState;

    fn name(&self) -> String {
        "guess-and-chase".into()
    }

    fn cops(&self) -> usize {
        self.home.len()
    }

    fn start(&self, g: &Graph) -> Result<Dist<CopConfig, GuessChaseState>> {
        Ok(self
            .opening(g, 0)
            .into_iter()
            .map(|(p, s)| (p, self.home.clone(), s))
            .collect())
    }

    fn next(&self, g: &Graph, current: &CopConfig, state: &GuessChaseState) -> Result<Dist<CopConfig, GuessChaseState>> {
        let round = state.round;
        Ok(match state.phase {
            RoundPhase::Guess { robber, left } => self.guess_step(g, current, robber, left, round),
            RoundPhase::Return if self.t_hat == 0 => {
                vec![(1.0, current.clone(), state.clone())]
            }
            RoundPhase::Return if *current == self.home => self
                .opening(g, round + 1)
                .into_iter()
                .flat_map(|(p, s)| match s.phase {
                    RoundPhase::Guess { robber, left } => self
                        .guess_step(g, current, robber, left, round + 1)
                        .into_iter()
                        .map(|(q, c, s)| (p * q, c, s))
                        .collect::<Vec<_>>(),
                    RoundPhase::Return => vec![(p, current.clone(), s)],
                })
                .collect(),
            RoundPhase::Return => vec![(1.0, self.step_home(g, current), state.clone())],
        })
    }

    fn round(&self, state: &GuessChaseState) -> Option<usize> {
        Some(state.round)
    }
}

/// Adversarial heuristic: stay as far from the nearest cop as possible.
#[derive(Debug, Clone, Default)]
pub struct GreedyEvader {
    pub speed: usize,
}

impl GreedyEvader {
    fn clearance(g: &Graph, cops: &CopConfig, v: usize) -> usize {
        cops.iter().map(|&c| g.distance(c, v)).min().unwrap_or(usize::MAX)
    }
}

impl RobberStrategy for GreedyEvader {
    type State = ();

    fn name(&self) -> String {
        "greedy-evader".into()
    }

    fn place(&self, g: &Graph, cops: &CopConfig) -> Result<Dist<usize, ()>> {
        let best = (0..g.n())
            .max_by_key(|&v| (Self::clearance(g, cops, v), std::cmp::Reverse(v)))
            .expect("graph is nonempty");
        Ok(vec![(1.0, best, ())])
    }

    fn respond(&self, g: &Graph, cops: &CopConfig, robber: usize, _s: &()) -> Result<Dist<usize, ()>> {
        let options = robber_moves(g, robber, cops, self.speed.max(1), MoveRule::Lazy);
        let best = options
            .into_iter()
            .max_by_key(|&v| (Self::clearance(g, cops, v), std::cmp::Reverse(v)))
            .unwrap_or(robber);
        Ok(vec![(1.0, best, ())])
    }
}

/// Places uniformly on a cop-free vertex and never moves.
#[derive(Debug, Clone, Default)]
pub struct UniformStationaryRobber;

impl RobberStrategy for UniformStationaryRobber {
    type State = ();

    fn name(&self) -> String {
        "uniform-stationary".into()
    }

    fn place(&self, g: &Graph, cops: &CopConfig) -> Result<Dist<usize, ()>> {
        let free: Vec<usize> = (0..g.n()).filter(|&v| !cops.contains(v)).collect();
        if free.is_empty() {
            return Ok(vec![(1.0, 0, ())]);
        }
        let p = 1.0 / free.len() as f64;
        Ok(free.into_iter().map(|v| (p, v, ())).collect())
    }

    fn respond(&self, _g: &Graph, _c: &CopConfig, robber: usize, _s: &()) -> Result<Dist<usize, ()>> {
        Ok(vec![(1.0, robber, ())])
    }
}

/// Uniform start, then `speed` uniform random-walk substeps per turn; a substep
/// onto a cop ends the walk there (capture).
#[derive(Debug, Clone)]
pub struct DrunkRobber {
    pub speed: usize,
}

impl DrunkRobber {
    pub fn new(speed: usize) -> Self {
        DrunkRobber { speed: speed.max(1) }
    }
}

impl RobberStrategy for DrunkRobber {
    type State = ();

    fn name(&self) -> String {
        "drunk".into()
    }

    fn place(&self, g: &Graph, _cops: &CopConfig) -> Result<Dist<usize, ()>> {
        let p = 1.0 / g.n() as f64;
        Ok((0..g.n()).map(|v| (p, v, ())).collect())
    }

    fn respond(&self, g: &Graph, cops: &CopConfig, robber: usize, _s: &()) -> Result<Dist<usize, ()>> {
        let mut point = vec![0.0; g.n()];
        point[robber] = 1.0;
        Ok(belief::walk(g, &point, cops, self.speed)
            .into_iter()
            .enumerate()
            .filter(|(_, p)| *p > 0.0)
            .map(|(v, p)| (p, v, ()))
            .collect())
    }

    fn sample_place(&self, g: &Graph, _cops: &CopConfig, rng: &mut SimRng) -> Result<(usize, ())> {
        Ok((rng.gen_range(0..g.n()), ()))
    }

    fn sample_respond(&self, g: &Graph, cops: &CopConfig, robber: usize, _s: &(), rng: &mut SimRng) -> Result<(usize, ())> {
        let mut y = robber;
        for _ in 0..self.speed {
            let nb = g.neighbors(y);
            y = nb[rng.gen_range(0..nb.len())];
            if cops.contains(y) {
                break;
            }
        }
        Ok((y, ()))
    }

    fn is_drunk(&self) -> bool {
        true
    }
}
