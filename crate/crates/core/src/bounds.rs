//! Catalog of known values and bounds for the named graph families.
//!
//! Records whose constants only hold up to a `1 + o(1)` factor carry
//! `asymptotic = true` and never take part in certified comparisons.

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::closed_form::{infspeed_limits, tree_bounds, tree_e, InfSpeedLimits};
use crate::drunk::concentration_lower;
use crate::error::{Error, Result};
use crate::graph::{Family, Graph};
use crate::visible::{cop_number, visible_solve};
use crate::weight::{fmt_rational, rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Quantity {
    #[serde(rename = "ct_i")]
    Ct,
    #[serde(rename = "dct_i")]
    Dct,
    #[serde(rename = "F_i")]
    F,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::Ct => "ct_i",
            Quantity::Dct => "dct_i",
            Quantity::F => "F_i",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Lower,
    Upper,
    Exact,
    Asymptotic,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Lower => "lower",
            Kind::Upper => "upper",
            Kind::Exact => "exact",
            Kind::Asymptotic => "asymptotic",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundValue {
    Rational(Rational),
    Real(f64),
}

impl BoundValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            BoundValue::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            BoundValue::Real(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            BoundValue::Rational(r) => Some(r),
            BoundValue::Real(_) => None,
        }
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Rational(r) => f.write_str(&fmt_rational(r)),
            BoundValue::Real(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRecord {
    pub family: String,
    pub params: String,
    pub quantity: Quantity,
    pub kind: Kind,
    pub value: BoundValue,
    pub source: String,
    pub asymptotic: bool,
}

impl BoundRecord {
    fn new(family: &Family, quantity: Quantity, kind: Kind, value: BoundValue, source: &str) -> Self {
        let (family, params) = family_key(family);
        BoundRecord {
            family,
            params,
            quantity,
            kind,
            value,
            source: source.to_string(),
            asymptotic: kind == Kind::Asymptotic,
        }
    }
}

/// `(family, params)` columns of a family instance.
pub fn family_key(f: &Family) -> (String, String) {
    match *f {
        Family::Path { n } => ("path".into(), format!("n={n}")),
        Family::Cycle { n } => ("cycle".into(), format!("n={n}")),
        Family::Star { leaves } => ("star".into(), format!("N={leaves}")),
        Family::Tree { d, depth } => ("tree".into(), format!("d={d};L={depth}")),
        Family::Grid { side } => ("grid".into(), format!("N={side}")),
        Family::Broom { c, n } => ("broom".into(), format!("c={c};n={n}")),
        Family::Custom => ("custom".into(), String::new()),
    }
}

fn exact(r: Rational) -> BoundValue {
    BoundValue::Rational(r)
}

fn int(v: i64) -> BoundValue {
    BoundValue::Rational(rat(v, 1))
}

/// Every applicable value or bound for a tagged family instance.
/// Untagged (custom) graphs yield an empty list.
pub fn family_values(family: &Family) -> Vec<BoundRecord> {
    use Kind::*;
    use Quantity::*;
    let rec = |q, k, v, s: &str| BoundRecord::new(family, q, k, v, s);
    let mut out = Vec::new();
    match *family {
        Family::Star { leaves } => {
            let n = leaves as i64;
            out.push(rec(Ct, Exact, int(n), "star value, random leaf tour"));
            out.push(rec(Dct, Exact, exact(rat(n, n + 1)), "star value, cop parked at center"));
            out.push(rec(F, Exact, int(n + 1), "star value ratio"));
        }
        Family::Path { n } => {
            let n = n as i64;
            out.push(rec(Ct, Exact, int(n - 1), "path value, end-to-end sweep"));
            out.push(rec(Dct, Upper, exact(rat(n - 1, 2)), "path sweep against a drunk robber"));
            out.push(rec(Dct, Asymptotic, exact(rat(n, 2)), "path drunk lower bound, non-certified"));
            if n >= 2 {
                out.push(rec(F, Lower, int(2), "path value over the sweep upper bound"));
            }
            out.push(rec(F, Asymptotic, int(2), "path ratio limit"));
        }
        Family::Cycle { n } => {
            let n = n as i64;
            out.push(rec(Ct, Exact, exact(rat(n - 1, 2)), "cycle value, two cops"));
            out.push(rec(Dct, Upper, exact(rat(n - 1, 4)), "cycle drunk upper bound, two cops"));
            out.push(rec(Dct, Asymptotic, exact(rat(n, 4)), "cycle drunk lower bound, non-certified"));
            out.push(rec(F, Asymptotic, int(2), "cycle ratio limit"));
        }
        Family::Tree { d, depth } => {
            if let Ok(b) = tree_bounds(d, depth) {
                out.push(rec(Ct, Upper, exact(b.round_upper.clone()), "tree round strategy"));
                if depth >= 2 {
                    out.push(rec(Ct, Lower, exact(b.evader_lower.clone()), "tree distance-two robber"));
                }
                let lead = 2.0 * depth as f64 * (d as f64).powi(depth as i32 - 1) * (d as f64 - 1.0) / d as f64;
                out.push(rec(Ct, Asymptotic, BoundValue::Real(lead), "tree leading term"));
                if let Ok(e) = tree_e(d, depth) {
                    let n = crate::graph::tree_size(d, depth) as i64;
                    let total: Rational = e
                        .iter()
                        .enumerate()
                        .map(|(j, ej)| rat((d as i64).pow(j as u32 + 1), 1) * ej)
                        .sum();
                    let dct_up = total / rat(n, 1);
                    if depth >= 2 {
                        out.push(rec(F, Lower, exact(b.evader_lower / dct_up.clone()), "tree robber bound over parked cop"));
                    }
                    out.push(rec(Dct, Upper, exact(dct_up), "cop parked at the root"));
                }
                out.push(rec(
                    F,
                    Asymptotic,
                    BoundValue::Real((crate::graph::tree_size(d, depth) as f64).ln()),
                    "tree ratio order log n",
                ));
            }
        }
        Family::Grid { side } => {
            out.push(rec(Ct, Upper, exact(grid_guess_chase_expression(side)), "grid guess-and-chase rounds"));
            out.push(rec(Dct, Asymptotic, int((side * side) as i64), "grid drunk order n"));
        }
        Family::Broom { c, n } => {
            out.push(rec(Ct, Asymptotic, BoundValue::Real(n as f64), "broom value order"));
            out.push(rec(Dct, Asymptotic, BoundValue::Real(c * c * n as f64 / 2.0), "broom drunk leading term"));
            out.push(rec(F, Asymptotic, BoundValue::Real(2.0 / (c * c)), "broom ratio limit"));
        }
        Family::Custom => {}
    }
    if let (Ok(g), true) = (family.build(), family_size(family) <= 5000) {
        if let Ok(k) = cop_number(&g) {
            if let Ok(l) = concentration_lower(&g, k) {
                if let Some(b) = l.bound {
                    out.push(rec(Dct, Lower, BoundValue::Real(b), "belief concentration bound"));
                }
            }
        }
    }
    out
}

fn family_size(f: &Family) -> usize {
    match *f {
        Family::Path { n } | Family::Cycle { n } | Family::Broom { n, .. } => n,
        Family::Star { leaves } => leaves + 1,
        Family::Tree { d, depth } => crate::graph::tree_size(d, depth),
        Family::Grid { side } => side * side,
        Family::Custom => usize::MAX,
    }
}

/// Writes records as CSV with the header `family,params,quantity,kind,value,source,asymptotic`.
pub fn records_to_csv(records: &[BoundRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["family", "params", "quantity", "kind", "value", "source", "asymptotic"])
?;
    for r in records {
        w.write_record([
            r.family.clone(),
            r.params.clone(),
            r.quantity.to_string(),
            r.kind.to_string(),
            r.value.to_string(),
            r.source.clone(),
            r.asymptotic.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Inputs and value of `(T̂ + D)(Δ + 1)^T̂ n` for a graph with `c(G)` cops.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GuessChaseBound {
    pub cops: usize,
    pub t_hat: usize,
    pub diameter: usize,
    pub max_degree: usize,
    #[serde(serialize_with = "crate::closed_form::ser_rational")]
    pub value: Rational,
}

pub fn guess_chase_upper(g: &Graph) -> Result<GuessChaseBound> {
    let cops = cop_number(g)?;
    let res = visible_solve(g, cops)?;
    let t_hat = res
        .t_hat
        .ok_or_else(|| Error::not_applicable("guess-and-chase-bound", "cops cannot force capture"))?;
    let m = g.metrics();
    let factor = num_traits::pow(rat(m.max_degree as i64 + 1, 1), t_hat);
    let value = if t_hat == 0 && m.diameter == 0 {
        Rational::zero()
    } else {
        rat((t_hat + m.diameter) as i64, 1) * factor * rat(g.n() as i64, 1)
    };
    Ok(GuessChaseBound {
        cops,
        t_hat,
        diameter: m.diameter,
        max_degree: m.max_degree,
        value,
    })
}

/// `(3N - 1) n 5^{N-1}` for the `N x N` grid.
pub fn grid_guess_chase_expression(side: usize) -> Rational {
    let n = (side * side) as i64;
    rat(3 * side as i64 - 1, 1) * rat(n, 1) * num_traits::pow(rat(5, 1), side.saturating_sub(1))
}

/// A probability or constant bound clipped at zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Floored {
    pub value: f64,
    /// The unclipped expression was not positive.
    pub vacuous: bool,
    pub asymptotic: bool,
}

/// `1 - 12k / sqrt(r)`, floored at zero.
pub fn q_lower(k: usize, r: f64) -> Result<Floored> {
    if r <= 0.0 {
        return Err(Error::param("r must be positive"));
    }
    let raw = 1.0 - 12.0 * k as f64 / r.sqrt();
    Ok(Floored {
        value: raw.max(0.0),
        vacuous: raw <= 0.0,
        asymptotic: false,
    })
}

/// `(1/2)(1 - 24/sqrt(c))` without its `1 + o(1)` factor.
pub fn grid_round_constant(c_mult: f64) -> Result<Floored> {
    if c_mult <= 0.0 {
        return Err(Error::param("the multiplier must be positive"));
    }
    let raw = 0.5 * (1.0 - 24.0 / c_mult.sqrt());
    Ok(Floored {
        value: raw.max(0.0),
        vacuous: raw <= 0.0,
        asymptotic: true,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfSpeedReport {
    pub graph: String,
    pub cops: usize,
    #[serde(flatten)]
    pub limits: InfSpeedLimits,
}

/// Limits as the robber speed grows; the ratio limit only for families with a known fast-robber value.
pub fn infspeed_report(g: &Graph, cops: usize) -> Result<InfSpeedReport> {
    Ok(InfSpeedReport {
        graph: g.label(),
        cops,
        limits: infspeed_limits(g, cops)?,
    })
}

/// No certified upper or exact ratio falls below 1, and lower never exceeds upper.
pub fn consistent(records: &[BoundRecord]) -> bool {
    let certified = |q: Quantity, k: Kind| {
        records
            .iter()
            .filter(move |r| r.quantity == q && r.kind == k && !r.asymptotic)
            .map(|r| r.value.to_f64())
    };
    let ratio_ok = records
        .iter()
        .filter(|r| r.quantity == Quantity::F && !r.asymptotic && r.kind != Kind::Lower)
        .all(|r| r.value.to_f64() >= 1.0 - 1e-12);
    let ordered = [Quantity::Ct, Quantity::Dct, Quantity::F].iter().all(|&q| {
        let lo = certified(q, Kind::Lower)
            .chain(certified(q, Kind::Exact))
            .fold(f64::NEG_INFINITY, f64::max);
        let hi = certified(q, Kind::Upper)
            .chain(certified(q, Kind::Exact))
            .fold(f64::INFINITY, f64::min);
        lo <= hi + 1e-9
    });
    ratio_ok && ordered
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    fn find(recs: &[BoundRecord], q: Quantity, k: Kind) -> Option<&BoundRecord> {
        recs.iter().find(|r| r.quantity == q && r.kind == k)
    }

    #[test]
    fn star_records() {
        let recs = family_values(&Family::Star { leaves: 5 });
        assert_eq!(find(&recs, Quantity::Ct, Kind::Exact).unwrap().value, int(5));
        assert_eq!(find(&recs, Quantity::Dct, Kind::Exact).unwrap().value, exact(rat(5, 6)));
        assert_eq!(find(&recs, Quantity::F, Kind::Exact).unwrap().value, int(6));
        assert!(consistent(&recs));
    }

    #[test]
    fn path_records() {
        let recs = family_values(&Family::Path { n: 100 });
        assert_eq!(find(&recs, Quantity::Ct, Kind::Exact).unwrap().value, int(99));
        assert_eq!(find(&recs, Quantity::Dct, Kind::Upper).unwrap().value, exact(rat(99, 2)));
        assert!(find(&recs, Quantity::Dct, Kind::Asymptotic).unwrap().asymptotic);
        assert!(consistent(&recs));
    }

    #[test]
    fn custom_is_empty() {
        assert!(family_values(&Family::Custom).is_empty());
    }

    #[test]
    fn guess_chase_values() {
        let b = guess_chase_upper(&graph::path(3).unwrap()).unwrap();
        assert_eq!((b.t_hat, b.diameter, b.max_degree), (1, 2, 2));
        assert_eq!(b.value, rat(27, 1));
        assert_eq!(guess_chase_upper(&graph::path(1).unwrap()).unwrap().value, rat(0, 1));
        assert_eq!(grid_guess_chase_expression(5), rat(218_750, 1));
    }

    #[test]
    fn floored_constants() {
        assert_eq!(q_lower(2, 2304.0).unwrap().value, 0.5);
        assert_eq!(grid_round_constant(2304.0).unwrap().value, 0.25);
        let v = q_lower(3, 100.0).unwrap();
        assert!(v.vacuous && v.value == 0.0);
    }

    #[test]
    fn csv_header() {
        let csv = records_to_csv(&family_values(&Family::Star { leaves: 1 })).unwrap();
        assert!(csv.starts_with("family,params,quantity,kind,value,source,asymptotic\n"));
        assert!(csv.contains("star,N=1,F_i,exact,2,"));
    }
}
