//! Exact closed-form expressions for the named families.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Family, Graph};
use crate::weight::{rat, Rational};

fn pow(d: usize, e: i64) -> Rational {
    let base = rat(d as i64, 1);
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        Rational::one() / num_traits::pow(base, (-e) as usize)
    }
}

fn check_tree(d: usize, depth: usize) -> Result<()> {
    if d < 2 || depth < 1 {
        return Err(Error::param(format!("tree needs d >= 2 and L >= 1, got d={d}, L={depth}")));
    }
    Ok(())
}

/// Expected drunk capture times `e_1, ..., e_L` by starting layer, against a cop
/// parked at the root of the complete `d`-ary tree of depth `L`.
pub fn tree_e(d: usize, depth: usize) -> Result<Vec<Rational>> {
    check_tree(d, depth)?;
    let mut out = Vec::with_capacity(depth);
    let mut prev = Rational::zero();
    for j in 1..=depth {
        let geometric: Rational = (0..=(depth - j) as i64).map(|k| pow(d, k)).sum();
        let e = rat(2, 1) * geometric - Rational::one() + prev;
        out.push(e.clone());
        prev = e;
    }
    Ok(out)
}

/// `e_L` in closed form: `(2d^{L+1} - 2)/(d-1)^2 - (2d + 2L)/(d-1) - L + 2`.
pub fn tree_e_deepest(d: usize, depth: usize) -> Result<Rational> {
    check_tree(d, depth)?;
    let dm1 = rat(d as i64 - 1, 1);
    let l = rat(depth as i64, 1);
    Ok((rat(2, 1) * pow(d, depth as i64 + 1) - rat(2, 1)) / (dm1.clone() * dm1.clone())
        - (rat(2 * d as i64, 1) + rat(2, 1) * l.clone()) / dm1
        - l
        + rat(2, 1))
}

/// The tree round strategy's upper bound and the distance-two robber's lower bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeBounds {
    #[serde(serialize_with = "ser_rational")]
    pub round_upper: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub evader_lower: Rational,
}

pub fn tree_bounds(d: usize, depth: usize) -> Result<TreeBounds> {
    check_tree(d, depth)?;
    let (di, li) = (d as i64, depth as i64);
    let round_upper = pow(d, li - 1) * rat(2 * li + 2 * (di - 1), 1) - rat(li + di - 1, 1);
    let evader_lower = rat(2 * li * (di - 1), 1) * pow(d, li - 2) - rat(li, 1);
    Ok(TreeBounds {
        round_upper,
        evader_lower,
    })
}

/// Quadratic `f_c(b, p, x) = a_2 x^2 + a_1 x + a_0` giving the broom capture
/// time in units of `n` for the `(b, p, x)` cop against the `q = b` robber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BroomF {
    pub value: f64,
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
}

pub fn broom_f(c: f64, b: f64, p: f64, x: f64) -> BroomF {
    let a2 = -(1.0 - p) * (1.0 - b) * (1.0 - c);
    let a1 = (1.0 - p) * (1.0 - 3.0 * c + b * c + b);
    let a0 = 2.0 * (1.0 - p) * (c - b) + 1.0;
    BroomF {
        value: a2 * x * x + a1 * x + a0,
        a2,
        a1,
        a0,
    }
}

/// Same polynomial with the coefficients multiplied out term by term.
pub fn broom_f_expanded(c: f64, b: f64, p: f64, x: f64) -> f64 {
    (-1.0 + b + c + p - b * c - b * p - c * p + b * c * p) * x * x
        + (1.0 + b - 3.0 * c - p + b * c - b * p + 3.0 * c * p - b * c * p) * x
        + (2.0 * c - 2.0 * b + 2.0 * b * p - 2.0 * c * p + 1.0)
}

/// One cop against an arbitrarily fast robber on the star with `N` leaves.
pub fn star_infspeed_ect(leaves: usize) -> Rational {
    rat(2 * leaves as i64 - 1, 1)
}

/// Limits as the robber speed grows without bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfSpeedLimits {
    #[serde(serialize_with = "ser_rational")]
    pub dct: Rational,
    /// Known only for the star and the path.
    #[serde(serialize_with = "ser_opt_rational")]
    pub ratio: Option<Rational>,
}

pub fn infspeed_limits(g: &Graph, cops: usize) -> Result<InfSpeedLimits> {
    let n = g.n();
    if cops == 0 || cops > n {
        return Err(Error::param(format!("need 1..={n} cops, got {cops}")));
    }
    let dct = rat((n - cops) as i64, n as i64);
    let fast_ct = match *g.family() {
        Family::Star { leaves } if cops == 1 => Some(star_infspeed_ect(leaves)),
        Family::Path { n } if cops == 1 => Some(rat(n as i64 - 1, 1)),
        _ => None,
    };
    let ratio = if cops == n {
        None
    } else {
        fast_ct.map(|ct| rat(n as i64, (n - cops) as i64) * ct)
    };
    Ok(InfSpeedLimits { dct, ratio })
}

pub(crate) fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::weight::fmt_rational(r))
}

pub(crate) fn ser_opt_rational<S: serde::Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => ser_rational(r, s),
        None => s.serialize_none(),
    }
}
