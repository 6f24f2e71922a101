//! Experiment drivers behind the `cir` binary. Every command returns a
//! [`Table`] whose rows carry `schema`, `method` and `seed` columns, so the
//! same run configuration always renders to the same bytes.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::adversarial::{build_game, solve_exact, solve_iterative, SolveReport, DEFAULT_NODE_CAP};
use crate::belief::stationary_ect;
use crate::bounds::{
    family_key, family_values, grid_round_constant, infspeed_report, guess_chase_upper, q_lower, BoundRecord, Kind, Quantity,
};
use crate::closed_form::broom_f;
use crate::drunk::{dct_bracket, val_drunk_truncated, UpperStrategy, DEFAULT_BELIEF_CAP};
use crate::error::{Error, Result};
use crate::game::{all_configs, config_count, CopConfig, Rules};
use crate::graph::{broom, Family, Graph};
use crate::play::{monte_carlo, McConfig, McReport};
use crate::strategies::{cop_from_id, robber_from_id, BroomCop, BroomRobber};
use crate::visible::cop_number;
use crate::weight::{fmt_rational, snap_rational, Rational};

pub const SCHEMA: &str = "1";
/// Env var consulted for the default seed.
pub const SEED_ENV: &str = "CIR_SEED";
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::param(format!("unknown format `{s}`, expected csv or json"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Adversarial,
    Drunk,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adversarial" => Ok(Mode::Adversarial),
            "drunk" => Ok(Mode::Drunk),
            _ => Err(Error::param(format!("unknown mode `{s}`, expected adversarial or drunk"))),
        }
    }
}

/// Settings shared by all commands.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    /// `None` resolves to the cop number of each graph.
    pub cops: Option<usize>,
    pub speed: usize,
    pub horizon: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub format: Format,
    /// Relative tolerance used when comparing against reference values.
    pub tolerance: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            cops: None,
            speed: 1,
            horizon: None,
            trials: 2000,
            seed: DEFAULT_SEED,
            format: Format::Csv,
            tolerance: 0.1,
        }
    }
}

impl RunConfig {
    fn rules(&self) -> Rules {
        Rules::with_speed(self.speed)
    }

    fn cops_for(&self, g: &Graph) -> Result<usize> {
        match self.cops {
            Some(k) => Ok(k),
            None => cop_number(g),
        }
    }

    fn check_trials(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::param("trials must be at least 1"));
        }
        Ok(())
    }
}

/// A rectangular result with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row given as `(column, value)` pairs; missing columns stay empty.
    pub fn push(&mut self, cells: &[(&str, String)]) {
        let mut row = vec![String::new(); self.columns.len()];
        for (k, v) in cells {
            let i = self
                .columns
                .iter()
                .position(|c| c == k)
                .unwrap_or_else(|| panic!("unknown column {k}"));
            row[i] = v.clone();
        }
        self.rows.push(row);
    }

    pub fn get(&self, row: usize, column: &str) -> Option<&str> {
        let i = self.columns.iter().position(|c| c == column)?;
        self.rows.get(row).map(|r| r[i].as_str())
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
                Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
            }
            Format::Json => {
                let rows: Vec<serde_json::Map<String, serde_json::Value>> = self
                    .rows
                    .iter()
                    .map(|r| {
                        self.columns
                            .iter()
                            .zip(r)
                            .map(|(c, v)| (c.clone(), json_cell(v)))
                            .collect()
                    })
                    .collect();
                Ok(serde_json::to_string_pretty(&rows)? + "\n")
            }
        }
    }
}

fn json_cell(v: &str) -> serde_json::Value {
    if v.is_empty() {
        return serde_json::Value::Null;
    }
    if let Ok(i) = v.parse::<i64>() {
        return serde_json::json!(i);
    }
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() && !v.contains('/') => serde_json::json!(x),
        _ => serde_json::Value::String(v.to_string()),
    }
}

fn f(x: f64) -> String {
    format!("{x:.6}")
}

fn r(x: &Rational) -> String {
    fmt_rational(x)
}

/// Configuration with the smallest stationary expected capture time, scanning at most `limit` configurations.
pub fn best_stationary(g: &Graph, cops: usize, speed: usize, limit: usize) -> Result<(CopConfig, Rational)> {
    let count = config_count(g.n(), cops);
    if count > limit {
        return Err(Error::TooLarge {
            what: "stationary configuration scan",
            size: count,
            cap: limit,
        });
    }
    let mut best: Option<(CopConfig, Rational)> = None;
    for c in all_configs(g.n(), cops) {
        let v: Rational = stationary_ect(g, &c, speed)?;
        if best.as_ref().map_or(true, |(_, b)| v < *b) {
            best = Some((c, v));
        }
    }
    Ok(best.expect("at least one configuration"))
}

const TABLE_COLUMNS: &[&str] = &[
    "schema", "family", "params", "quantity", "kind", "value", "method", "source", "trials", "seed", "error",
];

fn parse_values(token: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for part in token.split(',').filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b): (usize, usize) = (
                a.parse().map_err(|_| Error::param(format!("bad range `{part}`")))?,
                b.parse().map_err(|_| Error::param(format!("bad range `{part}`")))?,
            );
            out.extend((a..=b).map(|v| v.to_string()));
        } else {
            out.push(part.to_string());
        }
    }
    Ok(out)
}

/// Expands `star 1..5`, `tree d=2 L=1..3`, `broom c=0.25,0.5 n=400` into family instances.
pub fn expand_families(family: &str, params: &[String]) -> Result<Vec<Family>> {
    let main_key = match family {
        "path" | "cycle" => "n",
        "star" => "N",
        "grid" => "N",
        "tree" | "broom" => "",
        _ => return Err(Error::param(format!("unknown family `{family}`"))),
    };
    let mut axes: Vec<(String, Vec<String>)> = Vec::new();
    for p in params {
        let (k, v) = match p.split_once('=') {
            Some((k, v)) => (k.to_string(), v),
            None => (main_key.to_string(), p.as_str()),
        };
        axes.push((k, parse_values(v)?));
    }
    let mut combos: Vec<Vec<(String, String)>> = vec![Vec::new()];
    for (k, vals) in &axes {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                vals.iter().map(move |v| {
                    let mut c = c.clone();
                    c.push((k.clone(), v.clone()));
                    c
                })
            })
            .collect();
    }
    if axes.is_empty() || axes.iter().any(|(_, v)| v.is_empty()) {
        return Ok(Vec::new());
    }
    combos
        .into_iter()
        .map(|c| {
            let spec = match family {
                "tree" | "broom" => format!(
                    "{family}:{}",
                    c.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
                ),
                _ => format!("{family}:{}", c[0].1),
            };
            spec.parse::<Family>()
        })
        .collect()
}

struct Defaults {
    adversarial: Option<(&'static str, &'static str)>,
    drunk_cop: Option<&'static str>,
}

fn defaults(f: &Family) -> Defaults {
    match f {
        Family::Star { .. } => Defaults {
            adversarial: Some(("star-sweep", "uniform-leaf")),
            drunk_cop: Some("stationary:0"),
        },
        Family::Path { .. } => Defaults {
            adversarial: Some(("path-sweep", "greedy-evader")),
            drunk_cop: Some("path-sweep"),
        },
        Family::Cycle { .. } => Defaults {
            adversarial: Some(("cycle-double-sweep", "greedy-evader")),
            drunk_cop: Some("cycle-double-sweep"),
        },
        Family::Tree { .. } => Defaults {
            adversarial: Some(("tree-round", "tree-distance2")),
            drunk_cop: Some("stationary:0"),
        },
        Family::Grid { .. } => Defaults {
            adversarial: None,
            drunk_cop: Some("grid-stationary"),
        },
        Family::Broom { .. } => Defaults {
            adversarial: Some(("broom-upper", "broom-robber")),
            drunk_cop: Some("broom-path-sweep"),
        },
        Family::Custom => Defaults {
            adversarial: None,
            drunk_cop: None,
        },
    }
}

fn mc_pair(g: &Graph, cop: &str, robber: &str, cops: usize, cfg: &RunConfig) -> Result<McReport> {
    let c = cop_from_id(cop, g, cops)?;
    let rb = robber_from_id(robber, g, cfg.speed)?;
    monte_carlo(g, &c, &rb, cfg.rules(), McConfig::new(cfg.trials, cfg.seed))
}

/// Catalog values, small-instance solver results and Monte Carlo estimates per family instance.
pub fn cmd_table(family: &str, params: &[String], cfg: &RunConfig) -> Result<Table> {
    cfg.check_trials()?;
    let mut t = Table::new(TABLE_COLUMNS);
    for fam in expand_families(family, params)? {
        let fam_label = fam.to_string();
        let seed = cfg.seed.to_string();
        let trials = cfg.trials.to_string();
        let push_rec = |t: &mut Table, rec: &BoundRecord| {
            t.push(&[
                ("schema", SCHEMA.into()),
                ("family", fam_label.clone()),
                ("params", rec.params.clone()),
                ("quantity", rec.quantity.to_string()),
                ("kind", rec.kind.to_string()),
                ("value", rec.value.to_string()),
                ("method", "formula".into()),
                ("source", rec.source.clone()),
                ("seed", seed.clone()),
            ])
        };
        for rec in family_values(&fam) {
            push_rec(&mut t, &rec);
        }
        let row = |q: &str, kind: &str, value: String, method: &str, source: String, trials: &str| -> Vec<(&'static str, String)> {
            vec![
                ("schema", SCHEMA.into()),
                ("family", fam.to_string()),
                ("quantity", q.to_string()),
                ("kind", kind.to_string()),
                ("value", value),
                ("method", method.to_string()),
                ("source", source),
                ("trials", trials.to_string()),
                ("seed", cfg.seed.to_string()),
            ]
        };
        let err_row = |q: &str, method: &str, source: &str, e: Error| -> Vec<(&'static str, String)> {
            vec![
                ("schema", SCHEMA.into()),
                ("family", fam.to_string()),
                ("quantity", q.to_string()),
                ("method", method.to_string()),
                ("source", source.to_string()),
                ("seed", cfg.seed.to_string()),
                ("error", e.to_string()),
            ]
        };
        let g = match fam.build() {
            Ok(g) => g,
            Err(e) => {
                t.push(&err_row("", "formula", "graph construction", e));
                continue;
            }
        };
        let cops = match cfg.cops_for(&g) {
            Ok(k) => k,
            Err(e) => {
                t.push(&err_row("", "exact", "cop number", e));
                continue;
            }
        };
        let n = g.n();
        if n <= 6 && cops <= 2 {
            let m = cfg.horizon.unwrap_or((2 * (n - 1)).clamp(1, 10));
            match solve_exact(&g, cops, m, cfg.rules()) {
                Ok(rep) => t.push(&row(
                    "ct_i",
                    "lower",
                    rep.value_fraction.clone().unwrap_or_else(|| f(rep.value)),
                    "exact",
                    format!("truncated game m={m}"),
                    "",
                )),
                Err(e) => t.push(&err_row("ct_i", "exact", "truncated game", e)),
            }
        }
        if n <= 12 {
            let m = cfg.horizon.unwrap_or(6);
            let res = best_stationary(&g, cops, cfg.speed, 2000)
                .and_then(|(c, _)| dct_bracket(&g, cops, m, &UpperStrategy::Stationary(c), cfg.rules()));
            match res {
                Ok(b) => {
                    t.push(&row("dct_i", "lower", r(&b.lower), "bracket", format!("truncated drunk game m={m}"), ""));
                    t.push(&row("dct_i", "upper", r(&b.upper), "bracket", b.upper_strategy.clone(), ""));
                }
                Err(e) => t.push(&err_row("dct_i", "bracket", "drunk bracket", e)),
            }
        }
        let d = defaults(&fam);
        let mut ct_mc = None;
        if let Some((cop, robber)) = d.adversarial {
            match mc_pair(&g, cop, robber, cops, cfg) {
                Ok(rep) => {
                    ct_mc = Some(rep.mean);
                    t.push(&row("ct_i", "estimate", f(rep.mean), "mc", format!("{cop} vs {robber}"), &trials));
                }
                Err(e) => t.push(&err_row("ct_i", "mc", cop, e)),
            }
        }
        if let Some(cop) = d.drunk_cop {
            match mc_pair(&g, cop, "drunk", cops, cfg) {
                Ok(rep) => {
                    t.push(&row("dct_i", "estimate", f(rep.mean), "mc", format!("{cop} vs drunk"), &trials));
                    if let Some(ct) = ct_mc {
                        if rep.mean > 0.0 {
                            t.push(&row("F_i", "estimate", f(ct / rep.mean), "mc", "ratio of estimates".into(), &trials));
                        }
                    }
                }
                Err(e) => t.push(&err_row("dct_i", "mc", cop, e)),
            }
        }
    }
    Ok(t)
}

/// Drunk-robber bracket: truncated optimum below, best stationary configuration above.
pub fn cmd_solve_drunk(graph: &str, cfg: &RunConfig) -> Result<Table> {
    let g = Graph::from_spec(graph)?;
    let cops = cfg.cops_for(&g)?;
    let m = cfg.horizon.unwrap_or(6);
    let sol = val_drunk_truncated(&g, cops, m, cfg.rules(), DEFAULT_BELIEF_CAP)?;
    let (cfg_best, up) = best_stationary(&g, cops, cfg.speed, 5000)?;
    let mut t = Table::new(&[
        "schema", "graph", "cops", "speed", "horizon", "lower", "lower_exact", "upper", "upper_strategy", "closed",
        "first_moves", "states", "method", "seed",
    ]);
    let closed = sol.value == up;
    t.push(&[
        ("schema", SCHEMA.into()),
        ("graph", g.label()),
        ("cops", cops.to_string()),
        ("speed", cfg.speed.to_string()),
        ("horizon", m.to_string()),
        ("lower", r(&sol.value)),
        ("lower_exact", sol.exact.to_string()),
        ("upper", r(&up)),
        ("upper_strategy", format!("stationary{cfg_best}")),
        ("closed", closed.to_string()),
        (
            "first_moves",
            sol.first_moves.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "),
        ),
        ("states", sol.states.to_string()),
        ("method", if closed { "exact" } else { "bracket" }.into()),
        ("seed", cfg.seed.to_string()),
    ]);
    Ok(t)
}

/// Output of `solve-adversarial`: a summary table, the full report, and optionally the tree dump.
pub struct AdversarialRun {
    pub table: Table,
    pub report: SolveReport,
    pub dump: Option<String>,
}

pub fn cmd_solve_adversarial(graph: &str, iterative: bool, iters: usize, target: f64, dump: bool, cfg: &RunConfig) -> Result<AdversarialRun> {
    let g = Graph::from_spec(graph)?;
    let cops = cfg.cops_for(&g)?;
    let m = cfg.horizon.unwrap_or(2 * g.n());
    let needs_tree = iterative || dump;
    let game = if needs_tree {
        Some(build_game(&g, cops, m, cfg.rules(), DEFAULT_NODE_CAP)?)
    } else {
        None
    };
    let report = match (&game, iterative) {
        (Some(game), true) => solve_iterative(&g, game, iters, target)?,
        _ => solve_exact(&g, cops, m, cfg.rules())?,
    };
    let mut t = Table::new(&[
        "schema", "graph", "cops", "speed", "horizon", "value", "fraction", "cop_best", "robber_best",
        "exploitability", "iterations", "size", "method", "seed",
    ]);
    t.push(&[
        ("schema", SCHEMA.into()),
        ("graph", report.graph.clone()),
        ("cops", cops.to_string()),
        ("speed", cfg.speed.to_string()),
        ("horizon", m.to_string()),
        ("value", f(report.value)),
        ("fraction", report.value_fraction.clone().unwrap_or_default()),
        ("cop_best", f(report.cop_best)),
        ("robber_best", f(report.robber_best)),
        ("exploitability", format!("{:.3e}", report.exploitability)),
        ("iterations", report.iterations.map(|i| i.to_string()).unwrap_or_default()),
        ("size", report.size.to_string()),
        ("method", if iterative { "bracket" } else { "exact" }.into()),
        ("seed", cfg.seed.to_string()),
    ]);
    Ok(AdversarialRun {
        table: t,
        report,
        dump: if dump { game.map(|g| g.dump()) } else { None },
    })
}

/// Monte Carlo of one strategy pair; `adversarial-` prefixes on robber ids are accepted.
pub fn cmd_simulate(graph: &str, cop: &str, robber: &str, cfg: &RunConfig) -> Result<Table> {
    cfg.check_trials()?;
    let g = Graph::from_spec(graph)?;
    let cops = cfg.cops_for(&g)?;
    let robber_id = robber.strip_prefix("adversarial-").unwrap_or(robber);
    let rep = mc_pair(&g, cop, robber_id, cops, cfg)?;
    let mut t = Table::new(&[
        "schema", "graph", "cops", "cop_strategy", "robber_strategy", "speed", "trials", "seed", "mean", "std_err",
        "ci_low", "ci_high", "max", "per_round_rate", "histogram", "method",
    ]);
    t.push(&[
        ("schema", SCHEMA.into()),
        ("graph", g.label()),
        ("cops", cops.to_string()),
        ("cop_strategy", cop.to_string()),
        ("robber_strategy", robber.to_string()),
        ("speed", cfg.speed.to_string()),
        ("trials", cfg.trials.to_string()),
        ("seed", cfg.seed.to_string()),
        ("mean", f(rep.mean)),
        ("std_err", f(rep.std_err)),
        ("ci_low", f(rep.ci95.0)),
        ("ci_high", f(rep.ci95.1)),
        ("max", rep.max.to_string()),
        ("per_round_rate", rep.per_round_rate().map(f).unwrap_or_default()),
        (
            "histogram",
            rep.histogram.iter().map(|(k, c)| format!("{k}:{c}")).collect::<Vec<_>>().join(";"),
        ),
        ("method", "mc".into()),
    ]);
    Ok(t)
}

const BOUND_COLUMNS: &[&str] = &[
    "schema", "family", "params", "quantity", "kind", "value", "source", "asymptotic", "method", "seed",
];

fn bound_row(rec: &BoundRecord, seed: u64) -> Vec<(&'static str, String)> {
    vec![
        ("schema", SCHEMA.into()),
        ("family", rec.family.clone()),
        ("params", rec.params.clone()),
        ("quantity", rec.quantity.to_string()),
        ("kind", rec.kind.to_string()),
        ("value", rec.value.to_string()),
        ("source", rec.source.clone()),
        ("asymptotic", rec.asymptotic.to_string()),
        ("method", "formula".into()),
        ("seed", seed.to_string()),
    ]
}

/// Catalog records for a graph, the guess-and-chase bound when the graph is small, and the fast-robber limits.
pub fn cmd_bounds(graph: &str, cfg: &RunConfig) -> Result<Table> {
    let g = Graph::from_spec(graph)?;
    let mut t = Table::new(BOUND_COLUMNS);
    for rec in family_values(g.family()) {
        t.push(&bound_row(&rec, cfg.seed));
    }
    let (family, params) = match g.family() {
        Family::Custom => ("custom".to_string(), format!("n={}", g.n())),
        f => family_key(f),
    };
    let base = |quantity: &str, kind: &str, value: String, source: &str, asymptotic: bool| -> Vec<(&'static str, String)> {
        vec![
            ("schema", SCHEMA.into()),
            ("family", family.clone()),
            ("params", params.clone()),
            ("quantity", quantity.into()),
            ("kind", kind.into()),
            ("value", value),
            ("source", source.into()),
            ("asymptotic", asymptotic.to_string()),
            ("method", "formula".into()),
            ("seed", cfg.seed.to_string()),
        ]
    };
    if g.n() <= 40 {
        match guess_chase_upper(&g) {
            Ok(b) => t.push(&base(
                &Quantity::Ct.to_string(),
                &Kind::Upper.to_string(),
                r(&b.value),
                &format!("guess-and-chase rounds (T={}, D={}, max degree {})", b.t_hat, b.diameter, b.max_degree),
                false,
            )),
            Err(e) => {
                let mut row = base("ct_i", "upper", String::new(), "guess-and-chase rounds", false);
                row.push(("error", e.to_string()));
                t.columns.push("error".into());
                for existing in t.rows.iter_mut() {
                    existing.push(String::new());
                }
                t.push(&row);
            }
        }
    }
    let cops = cfg.cops_for(&g)?;
    if cops < g.n() {
        let lim = infspeed_report(&g, cops)?;
        t.push(&base("dct_i", "limit", r(&lim.limits.dct), "fast robber limit", false));
        if let Some(ratio) = &lim.limits.ratio {
            t.push(&base("F_i", "limit", r(ratio), "fast robber limit", false));
        }
    }
    Ok(t)
}

/// The two probability constants of the grid argument, evaluated at given inputs.
pub fn cmd_grid_constants(k: usize, r_val: f64, c_mult: f64, cfg: &RunConfig) -> Result<Table> {
    let q = q_lower(k, r_val)?;
    let c = grid_round_constant(c_mult)?;
    let mut t = Table::new(&["schema", "quantity", "input", "value", "vacuous", "asymptotic", "method", "seed"]);
    t.push(&[
        ("schema", SCHEMA.into()),
        ("quantity", "q_lower".into()),
        ("input", format!("k={k};r={r_val}")),
        ("value", f(q.value)),
        ("vacuous", q.vacuous.to_string()),
        ("asymptotic", q.asymptotic.to_string()),
        ("method", "formula".into()),
        ("seed", cfg.seed.to_string()),
    ]);
    t.push(&[
        ("schema", SCHEMA.into()),
        ("quantity", "round_constant".into()),
        ("input", format!("c={c_mult}")),
        ("value", f(c.value)),
        ("vacuous", c.vacuous.to_string()),
        ("asymptotic", c.asymptotic.to_string()),
        ("method", "formula".into()),
        ("seed", cfg.seed.to_string()),
    ]);
    Ok(t)
}

/// Truncated values for `m = 0..=m_max`, with the first `m` of the final plateau.
pub fn cmd_convergence(graph: &str, mode: Mode, m_max: usize, cfg: &RunConfig) -> Result<Table> {
    let g = Graph::from_spec(graph)?;
    let cops = cfg.cops_for(&g)?;
    let mut values: Vec<std::result::Result<(f64, String), String>> = Vec::new();
    for m in 0..=m_max {
        let v = match mode {
            Mode::Adversarial => solve_exact(&g, cops, m, cfg.rules())
                .map(|rep| (rep.value, rep.value_fraction.unwrap_or_else(|| f(rep.value)))),
            Mode::Drunk => val_drunk_truncated(&g, cops, m, cfg.rules(), DEFAULT_BELIEF_CAP)
                .map(|s| (s.value.to_f64().unwrap_or(f64::NAN), r(&s.value))),
        };
        values.push(v.map_err(|e| e.to_string()));
    }
    let ok: Vec<f64> = values.iter().filter_map(|v| v.as_ref().ok().map(|x| x.0)).collect();
    let tol = 1e-7;
    let last = ok.last().copied();
    let plateau = last.map(|l| {
        let mut m = values.len() - 1;
        while m > 0 && values[m - 1].as_ref().map_or(false, |v| (v.0 - l).abs() <= tol) {
            m -= 1;
        }
        m
    });
    let mut t = Table::new(&[
        "schema", "graph", "cops", "mode", "m", "value", "fraction", "nondecreasing", "plateau_from", "method", "seed",
        "error",
    ]);
    let mut prev = f64::NEG_INFINITY;
    let mut monotone = true;
    for (m, v) in values.iter().enumerate() {
        let mut cells = vec![
            ("schema", SCHEMA.to_string()),
            ("graph", g.label()),
            ("cops", cops.to_string()),
            ("mode", format!("{mode:?}").to_lowercase()),
            ("m", m.to_string()),
            ("plateau_from", plateau.map(|p| p.to_string()).unwrap_or_default()),
            ("method", "exact".into()),
            ("seed", cfg.seed.to_string()),
        ];
        match v {
            Ok((x, frac)) => {
                monotone &= *x >= prev - tol;
                prev = *x;
                cells.push(("value", f(*x)));
                cells.push(("fraction", frac.clone()));
                cells.push(("nondecreasing", monotone.to_string()));
            }
            Err(e) => cells.push(("error", e.clone())),
        }
        t.push(&cells);
    }
    Ok(t)
}

/// Minimizer of the broom polynomial over a grid, with ties resolved toward `x = 1`, then small `p`, then small `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BroomScan {
    pub f_min: f64,
    pub b: f64,
    pub p: f64,
    pub x: f64,
}

pub fn broom_scan(c: f64, steps: usize) -> Result<BroomScan> {
    if steps < 2 || !(0.0..=1.0).contains(&c) || c == 0.0 {
        return Err(Error::param("broom scan needs c in (0, 1] and at least 2 grid steps"));
    }
    let grid = |hi: f64| (0..steps).map(move |i| hi * i as f64 / (steps - 1) as f64);
    let mut best: Option<BroomScan> = None;
    for x in grid(1.0).rev() {
        for p in grid(1.0) {
            for b in grid(c) {
                let v = broom_f(c, b, p, x).value;
                if best.map_or(true, |s| v < s.f_min - 1e-12) {
                    best = Some(BroomScan { f_min: v, b, p, x });
                }
            }
        }
    }
    Ok(best.expect("grid is nonempty"))
}

pub fn cmd_broom_scan(c: f64, n: usize, steps: usize, cfg: &RunConfig) -> Result<Table> {
    cfg.check_trials()?;
    let scan = broom_scan(c, steps)?;
    let mut t = Table::new(&[
        "schema", "c", "n", "quantity", "b", "p", "x", "value", "method", "trials", "seed", "error",
    ]);
    let cells = |q: &str, v: String, method: &str| {
        vec![
            ("schema", SCHEMA.to_string()),
            ("c", c.to_string()),
            ("n", n.to_string()),
            ("quantity", q.to_string()),
            ("b", scan.b.to_string()),
            ("p", scan.p.to_string()),
            ("x", scan.x.to_string()),
            ("value", v),
            ("method", method.to_string()),
            ("seed", cfg.seed.to_string()),
        ]
    };
    t.push(&cells("f_min", f(scan.f_min), "formula"));
    let sim = broom(c, n).and_then(|g| {
        let cop = BroomCop::new(&g, scan.b, scan.p, scan.x)?;
        let robber = BroomRobber::new(&g, None)?;
        monte_carlo(&g, &cop, &robber, cfg.rules(), McConfig::new(cfg.trials, cfg.seed))
    });
    match sim {
        Ok(rep) => {
            let mut a = cells("mean_capture", f(rep.mean), "mc");
            a.push(("trials", cfg.trials.to_string()));
            t.push(&a);
            let mut b = cells("mean_over_n", f(rep.mean / n as f64), "mc");
            b.push(("trials", cfg.trials.to_string()));
            t.push(&b);
        }
        Err(e) => {
            let mut a = cells("mean_capture", String::new(), "mc");
            a.push(("error", e.to_string()));
            t.push(&a);
        }
    }
    Ok(t)
}

/// Graphs checked by default in `conjecture-check`.
pub const CONJECTURE_GRAPHS: &[&str] = &[
    "path:2", "path:3", "path:4", "star:1", "star:2", "star:3", "cycle:3", "cycle:4", "cycle:5", "tree:d=2,L=1",
];

/// Compares the ratio of adversarial to drunk values against 2 using only certified quantities.
pub fn cmd_conjecture_check(graphs: &[String], cfg: &RunConfig) -> Result<Table> {
    let mut t = Table::new(&[
        "schema", "graph", "cops", "ct_lower", "ct_horizon", "dct_upper", "f_lower", "status", "method", "seed",
        "error",
    ]);
    for spec in graphs {
        let mut cells = vec![
            ("schema", SCHEMA.to_string()),
            ("graph", spec.clone()),
            ("method", "bracket".to_string()),
            ("seed", cfg.seed.to_string()),
        ];
        let result = (|| -> Result<Vec<(&'static str, String)>> {
            let g = Graph::from_spec(spec)?;
            let cops = cfg.cops_for(&g)?;
            let m = cfg.horizon.unwrap_or(if cops == 1 { (2 * g.n()).min(8) } else { 4 });
            let ct = solve_exact(&g, cops, m, cfg.rules())?;
            let ct_lower = snap_rational(ct.value, 1000, 1e-6)
                .map(|q| q.to_f64().unwrap_or(ct.value))
                .unwrap_or(ct.value);
            let (_, up) = best_stationary(&g, cops, cfg.speed, 5000)?;
            let up_f = up.to_f64().unwrap_or(f64::NAN);
            let ratio = if up_f > 0.0 { ct_lower / up_f } else { f64::INFINITY };
            let status = if ratio >= 2.0 - 1e-9 { "holds" } else { "undecided" };
            Ok(vec![
                ("cops", cops.to_string()),
                ("ct_lower", f(ct_lower)),
                ("ct_horizon", m.to_string()),
                ("dct_upper", r(&up)),
                ("f_lower", if ratio.is_finite() { f(ratio) } else { "inf".into() }),
                ("status", status.to_string()),
            ])
        })();
        match result {
            Ok(extra) => cells.extend(extra),
            Err(e) => cells.push(("error", e.to_string())),
        }
        t.push(&cells);
    }
    Ok(t)
}
