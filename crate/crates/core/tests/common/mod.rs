//! Independent oracles shared by the integration tests. Nothing here calls into
//! the solver modules; graphs are only read through their adjacency lists.

#![allow(dead_code)]

use cir::graph::Graph;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

/// Upper 1% point of the standard normal.
pub const Z99_ONE_SIDED: f64 = 2.326;
/// Two-sided 99% point.
pub const Z99_TWO_SIDED: f64 = 2.576;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn adjacency(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect()
}

/// Gauss-Jordan elimination over the rationals.
pub fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Vec<Q> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("nonsingular system");
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = Q::one() / a[col][col].clone();
        for k in col..n {
            a[col][k] = a[col][k].clone() * inv.clone();
        }
        b[col] = b[col].clone() * inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in col..n {
                    let sub = f.clone() * a[col][k].clone();
                    a[r][k] = a[r][k].clone() - sub;
                }
                let sub = f * b[col].clone();
                b[r] = b[r].clone() - sub;
            }
        }
    }
    b
}

/// Expected capture time of a unit-speed random walk from each vertex, against
/// cops that never move (zero on cop vertices).
pub fn hitting_times(adj: &[Vec<usize>], cops: &[usize]) -> Vec<Q> {
    let n = adj.len();
    let free: Vec<usize> = (0..n).filter(|v| !cops.contains(v)).collect();
    let idx = |v: usize| free.iter().position(|&u| u == v);
    let mut a = vec![vec![Q::zero(); free.len()]; free.len()];
    let b = vec![Q::one(); free.len()];
    for (i, &v) in free.iter().enumerate() {
        a[i][i] = Q::one();
        let share = q(1, adj[v].len() as i64);
        for &u in &adj[v] {
            if let Some(j) = idx(u) {
                a[i][j] = a[i][j].clone() - share.clone();
            }
        }
    }
    let h = solve(a, b);
    let mut out = vec![Q::zero(); n];
    for (v, hv) in free.into_iter().zip(h) {
        out[v] = hv;
    }
    out
}

/// [`hitting_times`] averaged over a uniform start.
pub fn stationary_hitting_time(adj: &[Vec<usize>], cops: &[usize]) -> Q {
    hitting_times(adj, cops).into_iter().sum::<Q>() / q(adj.len() as i64, 1)
}

/// `(E(min(T, L - 1)), P(survive))` of a uniform random walk robber against a
/// single cop following the `L` positions of `schedule`, by forward propagation
/// of the robber's law.
pub fn drunk_schedule(adj: &[Vec<usize>], schedule: &[usize]) -> (Q, Q) {
    let n = adj.len();
    let mut law: Vec<Q> = (0..n).map(|_| q(1, n as i64)).collect();
    law[schedule[0]] = Q::zero();
    let mut expected = Q::zero();
    for (t, &c) in schedule.iter().enumerate().skip(1) {
        let caught_by_cop = law[c].clone();
        law[c] = Q::zero();
        expected += caught_by_cop * q(t as i64, 1);
        let mut next = vec![Q::zero(); n];
        for v in 0..n {
            if law[v].is_zero() {
                continue;
            }
            let share = law[v].clone() / q(adj[v].len() as i64, 1);
            for &u in &adj[v] {
                next[u] += share.clone();
            }
        }
        expected += next[c].clone() * q(t as i64, 1);
        next[c] = Q::zero();
        law = next;
    }
    let alive: Q = law.into_iter().sum();
    expected += alive.clone() * q(schedule.len() as i64 - 1, 1);
    (expected, alive)
}

/// Whether `mean` is compatible with `mean >= bound` at the one-sided 99% level.
pub fn not_below(mean: f64, std_err: f64, bound: f64) -> bool {
    mean + Z99_ONE_SIDED * std_err >= bound
}

/// Whether `mean` is compatible with `mean <= bound` at the one-sided 99% level.
pub fn not_above(mean: f64, std_err: f64, bound: f64) -> bool {
    mean - Z99_ONE_SIDED * std_err <= bound
}

/// Per-round success rate with its binomial standard error.
pub fn round_rate(successes: usize, rounds: usize) -> (f64, f64) {
    let p = successes as f64 / rounds as f64;
    (p, (p * (1.0 - p) / rounds as f64).sqrt())
}

pub fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().expect("finite rational")
}
