use rand::Rng;

use crate::error::{Error, Result};
use crate::game::CopConfig;
use crate::graph::{broom_path_len, Family, Graph};
use crate::play::{CopStrategy, Dist, RobberStrategy, SimRng};

/// Vertex layout of `B(c, n)`: path `0..=center` (vertex 0 is the end), leaves after it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BroomShape {
    pub c: f64,
    pub n: usize,
    pub center: usize,
}

impl BroomShape {
    pub fn of(g: &Graph, who: &str) -> Result<Self> {
        match *g.family() {
            Family::Broom { c, n } => Ok(BroomShape {
                c,
                n,
                center: broom_path_len(c, n) - 1,
            }),
            _ => Err(Error::not_applicable(who, format!("{} is not a broom", g.label()))),
        }
    }

    pub fn end(&self) -> usize {
        0
    }

    pub fn leaves(&self) -> std::ops::Range<usize> {
        self.center + 1..self.n
    }

    pub fn leaf_count(&self) -> usize {
        self.n - self.center - 1
    }

    /// Path vertex closest to coordinate `b·n`, measured from the end.
    pub fn coordinate(&self, b: f64) -> usize {
        ((b * self.n as f64).round() as usize).min(self.center)
    }
}

fn unit(name: &str, v: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(Error::param(format!("{name} must lie in [0, 1], got {v}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Leg {
    WalkTo(usize),
    /// Visit this many distinct leaves (random order), returning to the center in between.
    Sweep(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BroomCopState {
    /// `true` for the branch that heads for the end first.
    far_first: bool,
    leg: usize,
    remaining: Vec<usize>,
    left: usize,
}

/// The `(b, p, x)` cop family: start at coordinate `b·n`; with probability `p`
/// walk to the end, then to the center and sweep every leaf; otherwise walk to
/// the center, sweep `⌊x·leaves⌋` random leaves, walk to the end, come back and
/// sweep every leaf. Afterwards it keeps cycling end, center, full sweep.
#[derive(Debug, Clone)]
pub struct BroomCop {
    shape: BroomShape,
    b: f64,
    p: f64,
    x: f64,
}

impl BroomCop {
    pub fn new(g: &Graph, b: f64, p: f64, x: f64) -> Result<Self> {
        Ok(BroomCop {
            shape: BroomShape::of(g, "broom-cop")?,
            b: unit("b", b)?,
            p: unit("p", p)?,
            x: unit("x", x)?,
        })
    }

    /// Start at the end, go to the center, sweep every leaf.
    pub fn upper(g: &Graph) -> Result<Self> {
        Self::new(g, 0.0, 0.0, 1.0)
    }

    pub fn params(&self) -> (f64, f64, f64) {
        (self.b, self.p, self.x)
    }

    fn plan(&self, far_first: bool) -> Vec<Leg> {
        let s = &self.shape;
        let all = s.leaf_count();
        if far_first {
            vec![Leg::WalkTo(s.end()), Leg::WalkTo(s.center), Leg::Sweep(all)]
        } else {
            let partial = (self.x * all as f64 + 1e-9).floor() as usize;
            vec![
                Leg::WalkTo(s.center),
                Leg::Sweep(partial.min(all)),
                Leg::WalkTo(s.end()),
                Leg::WalkTo(s.center),
                Leg::Sweep(all),
            ]
        }
    }

    fn leg(&self, far_first: bool, idx: usize) -> Leg {
        let plan = self.plan(far_first);
        if idx < plan.len() {
            plan[idx]
        } else {
            self.plan(true)[(idx - plan.len()) % 3]
        }
    }

    fn advance(&self, state: &mut BroomCopState) {
        let len = self.plan(state.far_first).len();
        state.leg += 1;
        if state.leg >= len + 3 {
            state.leg = len;
        }
        if let Leg::Sweep(k) = self.leg(state.far_first, state.leg) {
            state.remaining = self.shape.leaves().collect();
            state.left = k;
        } else {
            state.remaining.clear();
            state.left = 0;
        }
    }

    /// Either a deterministic move or, at the center during a sweep, the set of
    /// candidate leaves (chosen uniformly).
    fn decide(&self, g: &Graph, at: usize, state: &BroomCopState) -> Result<(Option<usize>, BroomCopState)> {
        let mut st = state.clone();
        for _ in 0..8 {
            match self.leg(st.far_first, st.leg) {
                Leg::WalkTo(v) if v == at => self.advance(&mut st),
                Leg::WalkTo(v) => return Ok((Some(g.step_toward(at, v)), st)),
                Leg::Sweep(_) if at != self.shape.center => return Ok((Some(self.shape.center), st)),
                Leg::Sweep(_) if st.left == 0 => self.advance(&mut st),
                Leg::Sweep(_) => return Ok((None, st)),
            }
        }
        Err(Error::Infeasible {
            turn: 0,
            detail: "broom cop plan made no progress".into(),
        })
    }

    fn initial(&self, far_first: bool) -> BroomCopState {
        let mut st = BroomCopState {
            far_first,
            leg: 0,
            remaining: Vec::new(),
            left: 0,
        };
        if let Leg::Sweep(k) = self.leg(far_first, 0) {
            st.remaining = self.shape.leaves().collect();
            st.left = k;
        }
        st
    }
}

fn visit(mut st: BroomCopState, leaf: usize) -> BroomCopState {
    st.remaining.retain(|&l| l != leaf);
    st.left -= 1;
    st
}

impl CopStrategy for BroomCop {
    type State = BroomCopState;

    fn name(&self) -> String {
        format!("broom-cop:b={},p={},x={}", self.b, self.p, self.x)
    }

    fn cops(&self) -> usize {
        1
    }

    fn start(&self, _g: &Graph) -> Result<Dist<CopConfig, BroomCopState>> {
        let x0 = CopConfig::single(self.shape.coordinate(self.b));
        let mut out = Vec::new();
        if self.p > 0.0 {
            out.push((self.p, x0.clone(), self.initial(true)));
        }
        if self.p < 1.0 {
            out.push((1.0 - self.p, x0, self.initial(false)));
        }
        Ok(out)
    }

    fn next(&self, g: &Graph, current: &CopConfig, state: &BroomCopState) -> Result<Dist<CopConfig, BroomCopState>> {
        let (mv, st) = self.decide(g, current.as_slice()[0], state)?;
        Ok(match mv {
            Some(v) => vec![(1.0, CopConfig::single(v), st)],
            None => {
                let p = 1.0 / st.remaining.len() as f64;
                st.remaining
                    .iter()
                    .map(|&leaf| (p, CopConfig::single(leaf), visit(st.clone(), leaf)))
                    .collect()
            }
        })
    }

    fn sample_next(&self, g: &Graph, current: &CopConfig, state: &BroomCopState, rng: &mut SimRng) -> Result<(CopConfig, BroomCopState)> {
        let (mv, st) = self.decide(g, current.as_slice()[0], state)?;
        Ok(match mv {
            Some(v) => (CopConfig::single(v), st),
            None => {
                let leaf = st.remaining[rng.gen_range(0..st.remaining.len())];
                (CopConfig::single(leaf), visit(st, leaf))
            }
        })
    }
}

/// Goes to the end with probability `q`, otherwise to a uniformly random leaf,
/// and stays there. Without an explicit `q` the robber uses `q = b`, reading
/// `b` off the cop's starting vertex (and `q = c` if the cop starts on a leaf).
#[derive(Debug, Clone)]
pub struct BroomRobber {
    shape: BroomShape,
    q: Option<f64>,
}

impl BroomRobber {
    pub fn new(g: &Graph, q: Option<f64>) -> Result<Self> {
        if let Some(q) = q {
            unit("q", q)?;
        }
        Ok(BroomRobber {
            shape: BroomShape::of(g, "broom-robber")?,
            q,
        })
    }

    pub fn q_for(&self, cop: usize) -> f64 {
        self.q.unwrap_or_else(|| {
            if cop <= self.shape.center {
                cop as f64 / self.shape.n as f64
            } else {
                self.shape.c
            }
        })
    }
}

impl RobberStrategy for BroomRobber {
    type State = ();

    fn name(&self) -> String {
        match self.q {
            Some(q) => format!("broom-robber:q={q}"),
            None => "broom-robber".into(),
        }
    }

    fn place(&self, _g: &Graph, cops: &CopConfig) -> Result<Dist<usize, ()>> {
        let q = cops.iter().map(|&v| self.q_for(v)).fold(0.0, f64::max);
        let leaves: Vec<usize> = self.shape.leaves().filter(|&v| !cops.contains(v)).collect();
        let end = self.shape.end();
        if leaves.is_empty() {
            let hide = if cops.contains(end) { self.shape.center } else { end };
            return Ok(vec![(1.0, hide, ())]);
        }
        let mut out = Vec::with_capacity(leaves.len() + 1);
        if q > 0.0 {
            out.push((q, end, ()));
        }
        let share = (1.0 - q) / leaves.len() as f64;
        if share > 0.0 {
            out.extend(leaves.into_iter().map(|v| (share, v, ())));
        }
        Ok(out)
    }

    fn respond(&self, _g: &Graph, _cops: &CopConfig, robber: usize, _s: &()) -> Result<Dist<usize, ()>> {
        Ok(vec![(1.0, robber, ())])
    }
}

/// Cop for the random-walk robber: center, wait one step, walk to the end, and
/// then bounce between the end and the center (waiting once at the center).
#[derive(Debug, Clone)]
pub struct BroomPathSweepCop {
    shape: BroomShape,
}

impl BroomPathSweepCop {
    pub fn new(g: &Graph) -> Result<Self> {
        Ok(BroomPathSweepCop {
            shape: BroomShape::of(g, "broom-path-sweep")?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepPhase {
    Wait,
    ToEnd,
    ToCenter,
}

impl CopStrategy for BroomPathSweepCop {
    type State = SweepPhase;

    fn name(&self) -> String {
        "broom-path-sweep".into()
    }

    fn cops(&self) -> usize {
        1
    }

    fn start(&self, _g: &Graph) -> Result<Dist<CopConfig, SweepPhase>> {
        Ok(vec![(1.0, CopConfig::single(self.shape.center), SweepPhase::Wait)])
    }

    fn next(&self, _g: &Graph, current: &CopConfig, phase: &SweepPhase) -> Result<Dist<CopConfig, SweepPhase>> {
        let v = current.as_slice()[0];
        let c = self.shape.center;
        let (w, next) = match *phase {
            SweepPhase::Wait => (v, SweepPhase::ToEnd),
            SweepPhase::ToEnd if v == 0 => ((1).min(c), SweepPhase::ToCenter),
            SweepPhase::ToEnd => (v - 1, SweepPhase::ToEnd),
            SweepPhase::ToCenter if v + 1 >= c => (c, SweepPhase::Wait),
            SweepPhase::ToCenter => (v + 1, SweepPhase::ToCenter),
        };
        Ok(vec![(1.0, CopConfig::single(w), next)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Rules;
    use crate::graph;
    use crate::play::evaluate_pair;

    #[test]
    fn shape_layout() {
        let g = graph::broom(0.5, 10).unwrap();
        let s = BroomShape::of(&g, "t").unwrap();
        assert_eq!(s.center, 4);
        assert_eq!(s.leaf_count(), 5);
        assert_eq!(s.coordinate(0.25), 3);
        assert_eq!(s.coordinate(1.0), 4);
    }

    #[test]
    fn upper_cop_against_leaf_hider() {
        // end -> center takes center steps, then the k-th leaf costs 2k - 1 more
        let g = graph::broom(0.5, 10).unwrap();
        let cop = BroomCop::upper(&g).unwrap();
        let robber = BroomRobber::new(&g, Some(0.0)).unwrap();
        let v = evaluate_pair(&g, &cop, &robber, Rules::default(), 40).unwrap();
        let leaves = 5.0;
        let expected = 4.0 + (1..=5).map(|k| (2 * k - 1) as f64).sum::<f64>() / leaves;
        assert!((v.expected - expected).abs() < 1e-9, "{}", v.expected);
        assert!(v.capture_certain());
    }

    #[test]
    fn partial_sweep_then_end() {
        let g = graph::broom(0.5, 8).unwrap();
        let cop = BroomCop::new(&g, 1.0, 0.0, 0.5).unwrap();
        // two leaves swept from the center (4 steps), then 3 steps to the end
        let robber = BroomRobber::new(&g, Some(1.0)).unwrap();
        let v = evaluate_pair(&g, &cop, &robber, Rules::default(), 60).unwrap();
        assert!((v.expected - 7.0).abs() < 1e-9, "{}", v.expected);
    }

    #[test]
    fn path_sweep_moves() {
        let g = graph::broom(0.5, 8).unwrap();
        let cop = BroomPathSweepCop::new(&g).unwrap();
        let (mut x, mut s) = (CopConfig::single(3), SweepPhase::Wait);
        let mut seen = vec![];
        for _ in 0..9 {
            let (_, nx, ns) = cop.next(&g, &x, &s).unwrap().remove(0);
            seen.push(nx.as_slice()[0]);
            x = nx;
            s = ns;
        }
        assert_eq!(seen, vec![3, 2, 1, 0, 1, 2, 3, 3, 2]);
    }

    #[test]
    fn parameter_validation() {
        let g = graph::broom(0.5, 8).unwrap();
        assert!(BroomCop::new(&g, 1.5, 0.0, 0.0).is_err());
        assert!(BroomRobber::new(&g, Some(-0.1)).is_err());
        assert!(BroomCop::new(&graph::path(4).unwrap(), 0.0, 0.0, 0.0).is_err());
    }
}
