use crate::error::{Error, Result};
use crate::game::CopConfig;
use crate::graph::{Family, Graph};
use crate::play::{CopStrategy, Dist, RobberStrategy};

fn star_leaves(g: &Graph, who: &str) -> Result<usize> {
    match *g.family() {
        Family::Star { leaves } => Ok(leaves),
        _ => Err(Error::not_applicable(who, format!("{} is not a star", g.label()))),
    }
}

/// Starts on a random leaf and alternates between the center and a uniformly
/// chosen unvisited leaf. Once every leaf has been visited the sweep restarts.
#[derive(Debug, Clone)]
pub struct StarSweepCop {
    leaves: usize,
}

impl StarSweepCop {
    pub fn new(g: &Graph) -> Result<Self> {
        Ok(StarSweepCop {
            leaves: star_leaves(g, "star-sweep")?,
        })
    }

    fn leaf_choices(&self, remaining: &[usize]) -> Dist<CopConfig, Vec<usize>> {
        let pool: Vec<usize> = if remaining.is_empty() {
            (1..=self.leaves).collect()
        } else {
            remaining.to_vec()
        };
        let p = 1.0 / pool.len() as f64;
        pool.iter()
            .map(|&leaf| {
                let rest = pool.iter().copied().filter(|&l| l != leaf).collect();
                (p, CopConfig::single(leaf), rest)
            })
            .collect()
    }
}

impl CopStrategy for StarSweepCop {
    /// Leaves not yet visited in the current sweep.
    type State = Vec<usize>;

    fn name(&self) -> String {
        "star-sweep".into()
    }

    fn cops(&self) -> usize {
        1
    }

    fn start(&self, _g: &Graph) -> Result<Dist<CopConfig, Vec<usize>>> {
        Ok(self.leaf_choices(&[]))
    }

    fn next(&self, _g: &Graph, current: &CopConfig, state: &Vec<usize>) -> Result<Dist<CopConfig, Vec<usize>>> {
        if current.as_slice() == [0] {
            Ok(self.leaf_choices(state))
        } else {
            Ok(vec![(1.0, CopConfig::single(0), state.clone())])
        }
    }
}

/// Hides on a uniformly chosen leaf not occupied by a cop and never moves.
/// Falls back to the lowest free vertex when every leaf is taken.
#[derive(Debug, Clone)]
pub struct UniformLeafRobber {
    leaves: usize,
}

impl UniformLeafRobber {
    pub fn new(g: &Graph) -> Result<Self> {
        Ok(UniformLeafRobber {
            leaves: star_leaves(g, "uniform-leaf")?,
        })
    }
}

impl RobberStrategy for UniformLeafRobber {
    type State = ();

    fn name(&self) -> String {
        "uniform-leaf".into()
    }

    fn place(&self, g: &Graph, cops: &CopConfig) -> Result<Dist<usize, ()>> {
        let free: Vec<usize> = (1..=self.leaves).filter(|&v| !cops.contains(v)).collect();
        if free.is_empty() {
            let v = (0..g.n()).find(|&v| !cops.contains(v)).unwrap_or(0);
            return Ok(vec![(1.0, v, ())]);
        }
        let p = 1.0 / free.len() as f64;
        Ok(free.into_iter().map(|v| (p, v, ())).collect())
    }

    fn respond(&self, _g: &Graph, _cops: &CopConfig, robber: usize, _state: &()) -> Result<Dist<usize, ()>> {
        Ok(vec![(1.0, robber, ())])
    }
}

/// Single cop against a fast robber on a star: center at even turns, a uniformly
/// random leaf (with repetition) at odd turns.
#[derive(Debug, Clone)]
pub struct StarInfSpeedCop {
    leaves: usize,
}

impl StarInfSpeedCop {
    pub fn new(g: &Graph) -> Result<Self> {
        Ok(StarInfSpeedCop {
            leaves: star_leaves(g, "star-infspeed")?,
        })
    }
}

impl CopStrategy for StarInfSpeedCop {
    type State = ();

    fn name(&self) -> String {
        "star-infspeed".into()
    }

    fn cops(&self) -> usize {
        1
    }

    fn start(&self, _g: &Graph) -> Result<Dist<CopConfig, ()>> {
        Ok(vec![(1.0, CopConfig::single(0), ())])
    }

    fn next(&self, _g: &Graph, current: &CopConfig, _state: &()) -> Result<Dist<CopConfig, ()>> {
        if current.as_slice() == [0] {
            let p = 1.0 / self.leaves as f64;
            Ok((1..=self.leaves).map(|l| (p, CopConfig::single(l), ())).collect())
        } else {
            Ok(vec![(1.0, CopConfig::single(0), ())])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Rules;
    use crate::graph;
    use crate::play::{best_response_value, evaluate_pair};

    #[test]
    fn sweep_against_uniform_leaf_is_n() {
        for n in 1..=4 {
            let g = graph::star(n).unwrap();
            let v = evaluate_pair(
                &g,
                &StarSweepCop::new(&g).unwrap(),
                &UniformLeafRobber::new(&g).unwrap(),
                Rules::default(),
                4 * n + 2,
            )
            .unwrap();
            assert!((v.expected - n as f64).abs() < 1e-12, "N={n}: {}", v.expected);
            assert!(v.capture_certain());
        }
    }

    #[test]
    fn sweep_best_response_is_n() {
        for n in 2..=3 {
            let g = graph::star(n).unwrap();
            let br = best_response_value(&g, &StarSweepCop::new(&g).unwrap(), Rules::default(), 2 * n + 2)
                .unwrap();
            assert!((br.value - n as f64).abs() < 1e-12, "N={n}: {}", br.value);
        }
    }

    #[test]
    fn rejects_other_families() {
        let g = graph::path(4).unwrap();
        assert!(StarSweepCop::new(&g).is_err());
        assert!(UniformLeafRobber::new(&g).is_err());
    }
}
