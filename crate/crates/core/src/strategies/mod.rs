//! Named cop and robber strategies, addressable by string ids such as
//! `tree-round` or `broom-cop:b=0.25,p=0,x=1`.

mod broom;
mod general;
mod star;
mod tree;

pub use broom::{BroomCop, BroomCopState, BroomPathSweepCop, BroomRobber, BroomShape, SweepPhase};
pub use general::{
    grid_stationary_cops, CycleDoubleSweepCop, DrunkRobber, GreedyEvader, GuessChaseCop,
    GuessChaseState, PathSweepCop, RandomWalkCop, RoundPhase, ScheduleCop, StationaryCop,
    UniformStationaryRobber,
};
pub use star::{StarInfSpeedCop, StarSweepCop, UniformLeafRobber};
pub use tree::{TreeDistance2Robber, TreeRoundCop, TreeRoundState, TreeStage};

use crate::error::{Error, Result};
use crate::game::CopConfig;
use crate::graph::{parse_kv, Graph};
use crate::play::{CopStrategy, Dist, RobberStrategy, SimRng};

/// Cop strategy ids accepted by [`cop_from_id`].
pub const COP_IDS: &[&str] = &[
    "star-sweep",
    "star-infspeed",
    "path-sweep",
    "cycle-double-sweep",
    "tree-round",
    "grid-stationary",
    "broom-cop:b=<b>,p=<p>,x=<x>",
    "broom-upper",
    "broom-path-sweep",
    "random-walk[:v1,v2,..]",
    "guess-and-chase",
    "stationary:v1,v2,..",
];

/// Robber strategy ids accepted by [`robber_from_id`].
pub const ROBBER_IDS: &[&str] = &[
    "uniform-leaf",
    "tree-distance2",
    "broom-robber[:q=<q>]",
    "greedy-evader",
    "uniform-stationary",
    "drunk",
];

fn split_id(id: &str) -> (&str, &str) {
    id.split_once(':').unwrap_or((id, ""))
}

fn vertex_list(id: &str, body: &str) -> Result<Vec<usize>> {
    body.split(',')
        .map(|v| {
            v.trim().parse().map_err(|_| Error::Parse {
                input: id.to_string(),
                reason: format!("`{v}` is not a vertex"),
            })
        })
        .collect()
}

fn float(id: &str, key: &str, v: &str) -> Result<f64> {
    v.parse().map_err(|_| Error::Parse {
        input: id.to_string(),
        reason: format!("{key}=`{v}` is not a number"),
    })
}

macro_rules! dispatch {
    ($any:ident, $state:ident, $trait:ident { $($var:ident($ty:ty)),* $(,)? }) => {
        #[derive(Debug, Clone)]
        pub enum $any {
            $($var($ty)),*
        }

        #[derive(Debug, Clone, PartialEq, Eq, Hash)]
        pub enum $state {
            $($var(<$ty as $trait>::State)),*
        }

        $(impl From<$ty> for $any {
            fn from(s: $ty) -> Self {
                $any::$var(s)
            }
        })*
    };
}

dispatch!(AnyCop, AnyCopState, CopStrategy {
    StarSweep(StarSweepCop),
    StarInfSpeed(StarInfSpeedCop),
    PathSweep(PathSweepCop),
    CycleDoubleSweep(CycleDoubleSweepCop),
    TreeRound(TreeRoundCop),
    Stationary(StationaryCop),
    Broom(BroomCop),
    BroomPathSweep(BroomPathSweepCop),
    RandomWalk(RandomWalkCop),
    GuessChase(GuessChaseCop),
    Schedule(ScheduleCop),
});

dispatch!(AnyRobber, AnyRobberState, RobberStrategy {
    UniformLeaf(UniformLeafRobber),
    TreeDistance2(TreeDistance2Robber),
    Broom(BroomRobber),
    Greedy(GreedyEvader),
    UniformStationary(UniformStationaryRobber),
    Drunk(DrunkRobber),
});

fn wrap<M, S, T>(d: Dist<M, S>, f: impl Fn(S) -> T) -> Dist<M, T> {
    d.into_iter().map(|(p, m, s)| (p, m, f(s))).collect()
}

fn mismatch() -> Error {
    Error::param("strategy state does not belong to this strategy")
}

macro_rules! each_cop {
    ($self:expr, $c:ident => $body:expr) => {
        match $self {
            AnyCop::StarSweep($c) => $body,
            AnyCop::StarInfSpeed($c) => $body,
            AnyCop::PathSweep($c) => $body,
            AnyCop::CycleDoubleSweep($c) => $body,
            AnyCop::TreeRound($c) => $body,
            AnyCop::Stationary($c) => $body,
            AnyCop::Broom($c) => $body,
            AnyCop::BroomPathSweep($c) => $body,
            AnyCop::RandomWalk($c) => $body,
            AnyCop::GuessChase($c) => $body,
            AnyCop::Schedule($c) => $body,
        }
    };
}

macro_rules! cop_with_state {
    ($self:expr, $state:expr, $c:ident, $s:ident => $body:expr) => {
        match ($self, $state) {
            (AnyCop::StarSweep($c), AnyCopState::StarSweep($s)) => $body(AnyCopState::StarSweep),
            (AnyCop::StarInfSpeed($c), AnyCopState::StarInfSpeed($s)) => $body(AnyCopState::StarInfSpeed),
            (AnyCop::PathSweep($c), AnyCopState::PathSweep($s)) => $body(AnyCopState::PathSweep),
            (AnyCop::CycleDoubleSweep($c), AnyCopState::CycleDoubleSweep($s)) => $body(AnyCopState::CycleDoubleSweep),
            (AnyCop::TreeRound($c), AnyCopState::TreeRound($s)) => $body(AnyCopState::TreeRound),
            (AnyCop::Stationary($c), AnyCopState::Stationary($s)) => $body(AnyCopState::Stationary),
            (AnyCop::Broom($c), AnyCopState::Broom($s)) => $body(AnyCopState::Broom),
            (AnyCop::BroomPathSweep($c), AnyCopState::BroomPathSweep($s)) => $body(AnyCopState::BroomPathSweep),
            (AnyCop::RandomWalk($c), AnyCopState::RandomWalk($s)) => $body(AnyCopState::RandomWalk),
            (AnyCop::GuessChase($c), AnyCopState::GuessChase($s)) => $body(AnyCopState::GuessChase),
            (AnyCop::Schedule($c), AnyCopState::Schedule($s)) => $body(AnyCopState::Schedule),
            _ => Err(mismatch()),
        }
    };
}

impl CopStrategy for AnyCop {
    type State = AnyCopState;

    fn name(&self) -> String {
        each_cop!(self, c => c.name())
    }

    fn cops(&self) -> usize {
        each_cop!(self, c => c.cops())
    }

    fn start(&self, g: &Graph) -> Result<Dist<CopConfig, AnyCopState>> {
        match self {
            AnyCop::StarSweep(c) => Ok(wrap(c.start(g)?, AnyCopState::StarSweep)),
            AnyCop::StarInfSpeed(c) => Ok(wrap(c.start(g)?, AnyCopState::StarInfSpeed)),
            AnyCop::PathSweep(c) => Ok(wrap(c.start(g)?, AnyCopState::PathSweep)),
            AnyCop::CycleDoubleSweep(c) => Ok(wrap(c.start(g)?, AnyCopState::CycleDoubleSweep)),
            AnyCop::TreeRound(c) => Ok(wrap(c.start(g)?, AnyCopState::TreeRound)),
            AnyCop::Stationary(c) => Ok(wrap(c.start(g)?, AnyCopState::Stationary)),
            AnyCop::Broom(c) => Ok(wrap(c.start(g)?, AnyCopState::Broom)),
            AnyCop::BroomPathSweep(c) => Ok(wrap(c.start(g)?, AnyCopState::BroomPathSweep)),
            AnyCop::RandomWalk(c) => Ok(wrap(c.start(g)?, AnyCopState::RandomWalk)),
            AnyCop::GuessChase(c) => Ok(wrap(c.start(g)?, AnyCopState::GuessChase)),
            AnyCop::Schedule(c) => Ok(wrap(c.start(g)?, AnyCopState::Schedule)),
        }
    }

    fn next(&self, g: &Graph, current: &CopConfig, state: &AnyCopState) -> Result<Dist<CopConfig, AnyCopState>> {
        cop_with_state!(self, state, c, s => |f| Ok(wrap(c.next(g, current, s)?, f)))
    }

    fn sample_start(&self, g: &Graph, rng: &mut SimRng) -> Result<(CopConfig, AnyCopState)> {
        match self {
            AnyCop::StarSweep(c) => c.sample_start(g, rng).map(|(x, s)| (x, AnyCopState::StarSweep(s))),
            AnyCop::StarInfSpeed(c) => c.sample_start(g, rng).map(|(x, s)| (x, AnyCopState::StarInfSpeed(s))),
            AnyCop::PathSweep(c) => c.sample_start(g, rng).map(|(x, s)| (x, AnyCopState::PathSweep(s))),
            AnyCop::CycleDoubleSweep(c) => c.sample_start(g, rng).map(|(x, s)| (x, AnyCopState::CycleDoubleSweep(s))),
            AnyCop::TreeRound(c) => c.sample_start(g, rng).map(|(x, s)| (x, AnyCopState::TreeRound(s))),
            AnyCop::Stationary(c) => c.sample_start(g, rng).map(|(x, s)| (x, AnyCopState::Stationary(s))),
            AnyCop::Broom(c) => c.sample_start(g, rng).map(|(x, s)| (x, AnyCopState::Broom(s))),
            AnyCop::BroomPathSweep(c) => c.sample_start(g, rng).map(|(x, s)| (x, AnyCopState::BroomPathSweep(s))),
            AnyCop::RandomWalk(c) => c.sample_start(g, rng).map(|(x, s)| (x, AnyCopState::RandomWalk(s))),
            AnyCop::GuessChase(c) => c.sample_start(g, rng).map(|(x, s)| (x, AnyCopState::GuessChase(s))),
            AnyCop::Schedule(c) => c.sample_start(g, rng).map(|(x, s)| (x, AnyCopState::Schedule(s))),
        }
    }

    fn sample_next(&self, g: &Graph, current: &CopConfig, state: &AnyCopState, rng: &mut SimRng) -> Result<(CopConfig, AnyCopState)> {
        cop_with_state!(self, state, c, s => |f: fn(_) -> AnyCopState| {
            c.sample_next(g, current, s, rng).map(|(x, s)| (x, f(s)))
        })
    }

    fn round(&self, state: &AnyCopState) -> Option<usize> {
        let r: Result<Option<usize>> = cop_with_state!(self, state, c, s => |_f: fn(_) -> AnyCopState| Ok(c.round(s)));
        r.ok().flatten()
    }
}

macro_rules! robber_with_state {
    ($self:expr, $state:expr, $r:ident, $s:ident => $body:expr) => {
        match ($self, $state) {
            (AnyRobber::UniformLeaf($r), AnyRobberState::UniformLeaf($s)) => $body(AnyRobberState::UniformLeaf),
            (AnyRobber::TreeDistance2($r), AnyRobberState::TreeDistance2($s)) => $body(AnyRobberState::TreeDistance2),
            (AnyRobber::Broom($r), AnyRobberState::Broom($s)) => $body(AnyRobberState::Broom),
            (AnyRobber::Greedy($r), AnyRobberState::Greedy($s)) => $body(AnyRobberState::Greedy),
            (AnyRobber::UniformStationary($r), AnyRobberState::UniformStationary($s)) => $body(AnyRobberState::UniformStationary),
            (AnyRobber::Drunk($r), AnyRobberState::Drunk($s)) => $body(AnyRobberState::Drunk),
            _ => Err(mismatch()),
        }
    };
}

macro_rules! each_robber {
    ($self:expr, $r:ident => $body:expr) => {
        match $self {
            AnyRobber::UniformLeaf($r) => $body(AnyRobberState::UniformLeaf),
            AnyRobber::TreeDistance2($r) => $body(AnyRobberState::TreeDistance2),
            AnyRobber::Broom($r) => $body(AnyRobberState::Broom),
            AnyRobber::Greedy($r) => $body(AnyRobberState::Greedy),
            AnyRobber::UniformStationary($r) => $body(AnyRobberState::UniformStationary),
            AnyRobber::Drunk($r) => $body(AnyRobberState::Drunk),
        }
    };
}

impl RobberStrategy for AnyRobber {
    type State = AnyRobberState;

    fn name(&self) -> String {
        each_robber!(self, r => |_f: fn(()) -> AnyRobberState| r.name())
    }

    fn place(&self, g: &Graph, cops: &CopConfig) -> Result<Dist<usize, AnyRobberState>> {
        each_robber!(self, r => |f| Ok(wrap(r.place(g, cops)?, f)))
    }

    fn respond(&self, g: &Graph, cops: &CopConfig, robber: usize, state: &AnyRobberState) -> Result<Dist<usize, AnyRobberState>> {
        robber_with_state!(self, state, r, s => |f| Ok(wrap(r.respond(g, cops, robber, s)?, f)))
    }

    fn sample_place(&self, g: &Graph, cops: &CopConfig, rng: &mut SimRng) -> Result<(usize, AnyRobberState)> {
        each_robber!(self, r => |f: fn(()) -> AnyRobberState| {
            r.sample_place(g, cops, rng).map(|(y, s)| (y, f(s)))
        })
    }

    fn sample_respond(&self, g: &Graph, cops: &CopConfig, robber: usize, state: &AnyRobberState, rng: &mut SimRng) -> Result<(usize, AnyRobberState)> {
        robber_with_state!(self, state, r, s => |f: fn(()) -> AnyRobberState| {
            r.sample_respond(g, cops, robber, s, rng).map(|(y, s)| (y, f(s)))
        })
    }

    fn is_drunk(&self) -> bool {
        matches!(self, AnyRobber::Drunk(_))
    }
}

/// Builds a cop strategy from its id; `cops` is the team size where it matters.
pub fn cop_from_id(id: &str, g: &Graph, cops: usize) -> Result<AnyCop> {
    let (name, body) = split_id(id);
    Ok(match name {
        "star-sweep" => StarSweepCop::new(g)?.into(),
        "star-infspeed" => StarInfSpeedCop::new(g)?.into(),
        "path-sweep" => PathSweepCop::new(g)?.into(),
        "cycle-double-sweep" => CycleDoubleSweepCop::new(g)?.into(),
        "tree-round" => TreeRoundCop::new(g)?.into(),
        "grid-stationary" => grid_stationary_cops(g, cops)?.into(),
        "broom-cop" => {
            let (mut b, mut p, mut x) = (0.0, 0.0, 1.0);
            for (k, v) in parse_kv(id, body)? {
                match k.as_str() {
                    "b" => b = float(id, &k, &v)?,
                    "p" => p = float(id, &k, &v)?,
                    "x" => x = float(id, &k, &v)?,
                    _ => {
                        return Err(Error::Parse {
                            input: id.into(),
                            reason: format!("unknown key `{k}`"),
                        })
                    }
                }
            }
            BroomCop::new(g, b, p, x)?.into()
        }
        "broom-upper" => BroomCop::upper(g)?.into(),
        "broom-path-sweep" => BroomPathSweepCop::new(g)?.into(),
        "random-walk" => {
            let start = if body.is_empty() {
                (0..cops).map(|i| i % g.n()).collect()
            } else {
                vertex_list(id, body)?
            };
            RandomWalkCop::new(g, CopConfig::new(start))?.into()
        }
        "guess-and-chase" => GuessChaseCop::new(g, cops)?.into(),
        "stationary" => StationaryCop::new(g, CopConfig::new(vertex_list(id, body)?))?.into(),
        _ => {
            return Err(Error::Parse {
                input: id.into(),
                reason: format!("unknown cop strategy; known: {}", COP_IDS.join(" ")),
            })
        }
    })
}

/// Builds a robber strategy from its id; `speed` only affects `drunk` and `greedy-evader`.
pub fn robber_from_id(id: &str, g: &Graph, speed: usize) -> Result<AnyRobber> {
    let (name, body) = split_id(id);
    Ok(match name {
        "uniform-leaf" => UniformLeafRobber::new(g)?.into(),
        "tree-distance2" => TreeDistance2Robber::new(g)?.into(),
        "broom-robber" => {
            let mut q = None;
            for (k, v) in parse_kv(id, body)? {
                if k != "q" {
                    return Err(Error::Parse {
                        input: id.into(),
                        reason: format!("unknown key `{k}`"),
                    });
                }
                q = Some(float(id, &k, &v)?);
            }
            BroomRobber::new(g, q)?.into()
        }
        "greedy-evader" => GreedyEvader { speed }.into(),
        "uniform-stationary" => UniformStationaryRobber.into(),
        "drunk" => DrunkRobber::new(speed).into(),
        _ => {
            return Err(Error::Parse {
                input: id.into(),
                reason: format!("unknown robber strategy; known: {}", ROBBER_IDS.join(" ")),
            })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Rules;
    use crate::graph;
    use crate::play::{evaluate_pair, monte_carlo, McConfig};

    #[test]
    fn ids_round_trip_through_dispatch() {
        let g = graph::star(3).unwrap();
        let cop = cop_from_id("star-sweep", &g, 1).unwrap();
        let robber = robber_from_id("uniform-leaf", &g, 1).unwrap();
        let v = evaluate_pair(&g, &cop, &robber, Rules::default(), 20).unwrap();
        assert!((v.expected - 3.0).abs() < 1e-12);
        let mc = monte_carlo(&g, &cop, &robber, Rules::default(), McConfig::new(200, 1)).unwrap();
        assert!(mc.mean > 1.0 && mc.mean < 5.0);
    }

    #[test]
    fn broom_params_parse() {
        let g = graph::broom(0.5, 20).unwrap();
        match cop_from_id("broom-cop:b=0.25,p=0,x=1", &g, 1).unwrap() {
            AnyCop::Broom(c) => assert_eq!(c.params(), (0.25, 0.0, 1.0)),
            other => panic!("{other:?}"),
        }
        assert!(cop_from_id("broom-cop:z=1", &g, 1).is_err());
        assert!(robber_from_id("broom-robber:q=0.3", &g, 1).is_ok());
    }

    #[test]
    fn stationary_and_unknown() {
        let g = graph::path(5).unwrap();
        assert_eq!(cop_from_id("stationary:1,3", &g, 2).unwrap().cops(), 2);
        assert!(cop_from_id("nope", &g, 1).is_err());
        assert!(robber_from_id("drunk", &g, 2).unwrap().is_drunk());
    }
}
