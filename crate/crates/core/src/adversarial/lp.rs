//! Exact solution of the truncated adversarial game as one linear program.
//!
//! Cops are represented by a realization plan `r(h)` over their own move
//! histories. Since the robber sees everything, his best continuation depends
//! only on the cop history and his current vertex, so his side collapses to
//! value variables `U(h, y)` bounded below by every safe move. Histories are
//! merged along graph automorphisms: only orbit representatives get variables.

use std::collections::HashMap;
use std::sync::Arc;

use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};

use crate::error::{Error, Result};
use crate::game::{all_configs, cop_moves, robber_moves, CopConfig, Rules};
use crate::graph::Graph;
use crate::play::{CopStrategy, Dist, RobberStrategy};
use crate::symmetry::{Symmetry, DEFAULT_GROUP_CAP};

/// Largest number of canonical cop histories the exact solver will expand.
pub const DEFAULT_HISTORY_CAP: usize = 1_000_000;

#[derive(Debug)]
struct HistNode {
    hist: Vec<CopConfig>,
    stab: Vec<usize>,
    /// `(move from the canonical history, child, σ with child = σ(hist + move))`.
    children: Vec<(CopConfig, usize, usize)>,
}

/// The expanded history forest plus the primal/dual solution.
#[derive(Debug)]
pub struct LpModel {
    g: Graph,
    rules: Rules,
    horizon: usize,
    sym: Symmetry,
    nodes: Vec<HistNode>,
    index: HashMap<Vec<CopConfig>, usize>,
    /// `(canonical placement node, number of placements in its orbit)`.
    roots: Vec<(usize, usize)>,
    r: Vec<f64>,
    /// Primal value of `A(node, y)` keyed by `(node, canonical y)`.
    after_move: HashMap<(usize, usize), f64>,
    /// Robber weights `(node, canonical y) -> [(y', weight)]`; `y = usize::MAX` for placement.
    robber: HashMap<(usize, usize), Vec<(usize, f64)>>,
    pub value: f64,
    pub variables: usize,
    pub constraints: usize,
}

impl LpModel {
    fn canon_vertex(&self, node: usize, y: usize) -> (usize, usize) {
        self.nodes[node]
            .stab
            .iter()
            .map(|&s| (self.sym.perm(s)[y], s))
            .min()
            .expect("stabilizer contains the identity")
    }

    pub fn histories(&self) -> usize {
        self.nodes.len()
    }

    pub fn group_order(&self) -> usize {
        self.sym.len()
    }

    /// Canonical node of an actual history, with `π` such that node = π(hist).
    fn locate(&self, hist: &[CopConfig]) -> Option<(usize, usize)> {
        let (canon, pi) = self.sym.canonical_history(hist);
        self.index.get(&canon).map(|&id| (id, pi))
    }

    /// Cop strategy table indexed by canonical history: `[(move, prob)]`.
    pub fn cop_table(&self) -> Vec<(String, Vec<(String, f64)>)> {
        let mut out = vec![(
            "root".to_string(),
            self.roots
                .iter()
                .map(|&(id, _)| (self.nodes[id].hist[0].to_string(), self.r[id]))
                .collect(),
        )];
        for (id, node) in self.nodes.iter().enumerate() {
            if node.children.is_empty() || self.r[id] <= 1e-12 {
                continue;
            }
            let probs = node
                .children
                .iter()
                .map(|(x, c, _)| (x.to_string(), self.r[*c] / self.r[id]))
                .filter(|(_, p)| *p > 1e-9)
                .collect();
            out.push((history_label(&node.hist), probs));
        }
        out
    }

    /// Robber table: `"history|y" -> [(y', prob)]` over canonical states with positive weight.
    pub fn robber_table(&self) -> Vec<(String, Vec<(String, f64)>)> {
        let mut keys: Vec<_> = self.robber.keys().copied().collect();
        keys.sort();
        keys.into_iter()
            .filter_map(|(node, y)| {
                let w = &self.robber[&(node, y)];
                let total: f64 = w.iter().map(|e| e.1).sum();
                (total > 1e-9).then(|| {
                    let at = if y == usize::MAX { "start".to_string() } else { y.to_string() };
                    (
                        format!("{}|{}", history_label(&self.nodes[node].hist), at),
                        w.iter()
                            .filter(|e| e.1 / total > 1e-9)
                            .map(|(v, p)| (v.to_string(), p / total))
                            .collect(),
                    )
                })
            })
            .collect()
    }
}

pub(crate) fn history_label(h: &[CopConfig]) -> String {
    h.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(">")
}

#[derive(Default)]
struct Rows {
    eq: Vec<Vec<(usize, f64)>>,
    eq_rhs: Vec<f64>,
    ineq: Vec<Vec<(usize, f64)>>,
    /// Robber bookkeeping for each inequality row: `(node, canonical y, y')`.
    ineq_tag: Vec<Option<(usize, usize, usize)>>,
}

struct Builder<'a> {
    model: &'a LpModel,
    vars: usize,
    u: HashMap<(usize, usize), usize>,
    a: HashMap<(usize, usize), usize>,
    pending_u: Vec<(usize, usize)>,
    pending_a: Vec<(usize, usize)>,
    rows: Rows,
}

impl Builder<'_> {
    fn fresh(&mut self) -> usize {
        self.vars += 1;
        self.vars - 1
    }

    fn u_var(&mut self, node: usize, y: usize) -> usize {
        if let Some(&v) = self.u.get(&(node, y)) {
            return v;
        }
        let v = self.fresh();
        self.u.insert((node, y), v);
        self.pending_u.push((node, y));
        v
    }

    fn a_var(&mut self, node: usize, y: usize) -> usize {
        if let Some(&v) = self.a.get(&(node, y)) {
            return v;
        }
        let v = self.fresh();
        self.a.insert((node, y), v);
        self.pending_a.push((node, y));
        v
    }

    fn layer(&self, node: usize) -> usize {
        self.model.nodes[node].hist.len() - 1
    }

    /// `A(node, y) = value after the robber survived the turn at y`.
    fn define_a(&mut self, node: usize, y: usize) {
        let m = self.model;
        let t = self.layer(node);
        let var = self.a[&(node, y)];
        let mut row = vec![(var, 1.0)];
        if t + 1 == m.horizon {
            row.push((node, -(m.horizon as f64)));
        } else {
            for k in 0..m.nodes[node].children.len() {
                let (x, child, sigma) = m.nodes[node].children[k].clone();
                if x.contains(y) {
                    row.push((child, -((t + 1) as f64)));
                } else {
                    let (yc, _) = m.canon_vertex(child, m.sym.perm(sigma)[y]);
                    let u = self.u_var(child, yc);
                    row.push((u, -1.0));
                }
            }
        }
        self.rows.eq.push(row);
        self.rows.eq_rhs.push(0.0);
    }

    /// `U(node, y) >= A(node, y')` for each safe reply `y'`.
    fn define_u(&mut self, node: usize, y: usize) {
        let m = self.model;
        let t = self.layer(node);
        let cops = m.nodes[node].hist[t].clone();
        let u = self.u[&(node, y)];
        let replies = robber_moves(&m.g, y, &cops, m.rules.speed, m.rules.moves);
        if replies.is_empty() {
            self.rows.ineq.push(vec![(u, -1.0), (node, t as f64)]);
            self.rows.ineq_tag.push(None);
        }
        for z in replies {
            let (zc, _) = m.canon_vertex(node, z);
            let a = self.a_var(node, zc);
            self.rows.ineq.push(vec![(u, -1.0), (a, 1.0)]);
            self.rows.ineq_tag.push(Some((node, y, z)));
        }
    }
}

fn build_forest(g: &Graph, sym: &Symmetry, cops: usize, horizon: usize, rules: Rules, cap: usize) -> Result<(Vec<HistNode>, HashMap<Vec<CopConfig>, usize>, Vec<(usize, usize)>)> {
    let mut nodes: Vec<HistNode> = Vec::new();
    let mut index: HashMap<Vec<CopConfig>, usize> = HashMap::new();
    let mut roots: Vec<(usize, usize)> = Vec::new();
    for x0 in all_configs(g.n(), cops) {
        let canon = vec![sym.canonical_config(&x0)];
        match index.get(&canon) {
            Some(&id) => {
                let slot = roots.iter_mut().find(|(r, _)| *r == id).expect("root registered");
                slot.1 += 1;
            }
            None => {
                let id = nodes.len();
                nodes.push(HistNode {
                    stab: sym.stabilizer(&canon),
                    hist: canon.clone(),
                    children: Vec::new(),
                });
                index.insert(canon, id);
                roots.push((id, 1));
            }
        }
    }
    let mut frontier: Vec<usize> = roots.iter().map(|r| r.0).collect();
    for _layer in 1..horizon {
        let mut next = Vec::new();
        for &id in &frontier {
            let last = nodes[id].hist.last().expect("nonempty").clone();
            let mut children = Vec::new();
            for x in cop_moves(g, &last, rules.moves) {
                let (img, sigma) = nodes[id]
                    .stab
                    .iter()
                    .map(|&s| (sym.apply(s, &x), s))
                    .min()
                    .expect("stabilizer contains the identity");
                let mut hist = nodes[id].hist.clone();
                hist.push(img.clone());
                let child = match index.get(&hist) {
                    Some(&c) => c,
                    None => {
                        let c = nodes.len();
                        if c >= cap {
                            return Err(Error::TooLarge {
                                what: "canonical cop history set",
                                size: c,
                                cap,
                            });
                        }
                        let stab = nodes[id]
                            .stab
                            .iter()
                            .copied()
                            .filter(|&s| sym.apply(s, &img) == img)
                            .collect();
                        nodes.push(HistNode {
                            hist: hist.clone(),
                            stab,
                            children: Vec::new(),
                        });
                        index.insert(hist, c);
                        next.push(c);
                        c
                    }
                };
                children.push((x, child, sigma));
            }
            nodes[id].children = children;
        }
        frontier = next;
    }
    Ok((nodes, index, roots))
}

/// Builds and solves the LP for `cops` cops and horizon `m >= 1`.
pub fn solve_lp(g: &Graph, cops: usize, horizon: usize, rules: Rules, cap: usize) -> Result<LpModel> {
    if horizon == 0 {
        return Err(Error::param("the linear program needs horizon m >= 1"));
    }
    if cops == 0 {
        return Err(Error::param("at least one cop is required"));
    }
    let sym = Symmetry::of_graph(g, DEFAULT_GROUP_CAP);
    let (nodes, index, roots) = build_forest(g, &sym, cops, horizon, rules, cap)?;
    let mut model = LpModel {
        g: g.clone(),
        rules,
        horizon,
        sym,
        nodes,
        index,
        roots,
        r: Vec::new(),
        after_move: HashMap::new(),
        robber: HashMap::new(),
        value: 0.0,
        variables: 0,
        constraints: 0,
    };
    let n_hist = model.nodes.len();
    let mut b = Builder {
        model: &model,
        vars: n_hist,
        u: HashMap::new(),
        a: HashMap::new(),
        pending_u: Vec::new(),
        pending_a: Vec::new(),
        rows: Rows::default(),
    };

    // realization plan: placements sum to one, flows are conserved
    b.rows.eq.push(model.roots.iter().map(|&(id, mult)| (id, mult as f64)).collect());
    b.rows.eq_rhs.push(1.0);
    for (id, node) in model.nodes.iter().enumerate() {
        if node.children.is_empty() {
            continue;
        }
        let mut row = vec![(id, -1.0)];
        row.extend(node.children.iter().map(|(_, c, _)| (*c, 1.0)));
        b.rows.eq.push(row);
        b.rows.eq_rhs.push(0.0);
    }

    // placement values
    let mut objective = Vec::new();
    for &(id, mult) in &model.roots {
        let u0 = b.fresh();
        objective.push((u0, mult as f64));
        let x0 = model.nodes[id].hist[0].clone();
        let free: Vec<usize> = (0..g.n()).filter(|&y| !x0.contains(y)).collect();
        if free.is_empty() {
            b.rows.ineq.push(vec![(u0, -1.0)]);
            b.rows.ineq_tag.push(None);
        }
        for y in free {
            let (yc, _) = model.canon_vertex(id, y);
            let a = b.a_var(id, yc);
            b.rows.ineq.push(vec![(u0, -1.0), (a, 1.0)]);
            b.rows.ineq_tag.push(Some((id, usize::MAX, y)));
        }
    }
    loop {
        if let Some((node, y)) = b.pending_a.pop() {
            b.define_a(node, y);
        } else if let Some((node, y)) = b.pending_u.pop() {
            b.define_u(node, y);
        } else {
            break;
        }
    }
    for id in 0..n_hist {
        b.rows.ineq.push(vec![(id, -1.0)]);
        b.rows.ineq_tag.push(None);
    }

    let n_vars = b.vars;
    let Builder { rows, a: a_vars, .. } = b;
    let n_eq = rows.eq.len();
    let n_rows = n_eq + rows.ineq.len();
    let (mut ii, mut jj, mut vv) = (Vec::new(), Vec::new(), Vec::new());
    for (r, row) in rows.eq.iter().chain(rows.ineq.iter()).enumerate() {
        for &(c, v) in row {
            ii.push(r);
            jj.push(c);
            vv.push(v);
        }
    }
    let a_mat = CscMatrix::new_from_triplets(n_rows, n_vars, ii, jj, vv);
    let p_mat = CscMatrix::<f64>::zeros((n_vars, n_vars));
    let mut q = vec![0.0; n_vars];
    for (v, w) in objective {
        q[v] = w;
    }
    let mut rhs = rows.eq_rhs.clone();
    rhs.resize(n_rows, 0.0);
    let cones = [SupportedConeT::ZeroConeT(n_eq), SupportedConeT::NonnegativeConeT(rows.ineq.len())];
    let settings = DefaultSettingsBuilder::default()
        .verbose(false)
        .max_iter(500)
        .tol_gap_abs(1e-10)
        .tol_gap_rel(1e-10)
        .tol_feas(1e-10)
        .build()
        .map_err(|e| Error::Solver(format!("{e:?}")))?;
    let mut solver = DefaultSolver::new(&p_mat, &q, &a_mat, &rhs, &cones, settings)
        .map_err(|e| Error::Solver(format!("{e:?}")))?;
    solver.solve();
    let sol = &solver.solution;
    if !matches!(sol.status, SolverStatus::Solved | SolverStatus::AlmostSolved) {
        return Err(Error::Solver(format!("status {:?}", sol.status)));
    }
    model.value = sol.obj_val;
    model.r = sol.x[..n_hist].iter().map(|v| v.max(0.0)).collect();
    model.after_move = a_vars.iter().map(|(&k, &v)| (k, sol.x[v])).collect();
    for (k, tag) in rows.ineq_tag.iter().enumerate() {
        if let Some((node, y, z)) = *tag {
            let w = sol.z[n_eq + k].max(0.0);
            model.robber.entry((node, y)).or_default().push((z, w));
        }
    }
    model.variables = n_vars;
    model.constraints = n_rows;
    Ok(model)
}

/// Cop strategy read off the realization plan; stays put after the horizon.
#[derive(Debug, Clone)]
pub struct TableCop {
    model: Arc<LpModel>,
    cops: usize,
}

impl TableCop {
    pub fn new(model: Arc<LpModel>, cops: usize) -> Self {
        TableCop { model, cops }
    }
}

fn normalize<M, S>(mut d: Dist<M, S>) -> Dist<M, S> {
    d.retain(|e| e.0 > 1e-12);
    let total: f64 = d.iter().map(|e| e.0).sum();
    for e in d.iter_mut() {
        e.0 /= total;
    }
    d
}

impl CopStrategy for TableCop {
    type State = Vec<CopConfig>;

    fn name(&self) -> String {
        "lp-table-cop".into()
    }

    fn cops(&self) -> usize {
        self.cops
    }

    fn start(&self, g: &Graph) -> Result<Dist<CopConfig, Vec<CopConfig>>> {
        let m = &self.model;
        let d = all_configs(g.n(), self.cops)
            .into_iter()
            .map(|x| {
                let id = m.index[&vec![m.sym.canonical_config(&x)]];
                (m.r[id], x.clone(), vec![x])
            })
            .collect();
        Ok(normalize(d))
    }

    fn next(&self, g: &Graph, current: &CopConfig, hist: &Vec<CopConfig>) -> Result<Dist<CopConfig, Vec<CopConfig>>> {
        let m = &self.model;
        let moves = cop_moves(g, current, m.rules.moves);
        let located = (hist.len() < m.horizon).then(|| m.locate(hist)).flatten();
        let Some((id, pi)) = located else {
            return Ok(vec![(1.0, current.clone(), hist.clone())]);
        };
        let node = &m.nodes[id];
        let extend = |x: &CopConfig| {
            let mut h = hist.clone();
            h.push(x.clone());
            h
        };
        if m.r[id] <= 1e-12 || node.children.is_empty() {
            let p = 1.0 / moves.len() as f64;
            return Ok(moves.iter().map(|x| (p, x.clone(), extend(x))).collect());
        }
        let d = moves
            .iter()
            .map(|x| {
                let img = m.sym.apply(pi, x);
                let child = node
                    .children
                    .iter()
                    .find(|(c, _, _)| *c == img)
                    .map(|e| e.1)
                    .expect("every cop move has a child");
                (m.r[child] / m.r[id], x.clone(), extend(x))
            })
            .collect();
        Ok(normalize(d))
    }
}

/// Robber strategy read off the dual solution; state is the cop history seen so far.
#[derive(Debug, Clone)]
pub struct TableRobber {
    model: Arc<LpModel>,
}

impl TableRobber {
    pub fn new(model: Arc<LpModel>) -> Self {
        TableRobber { model }
    }

    /// Distribution over replies from `y` (or placements when `y` is `None`) after history `hist`.
    fn choose(&self, hist: &[CopConfig], y: Option<usize>) -> Option<Vec<(f64, usize)>> {
        let m = &self.model;
        let (id, pi) = m.locate(hist)?;
        let inv = |s: usize, v: usize| {
            let j = m.sym.inverse(s);
            m.sym.perm(j)[v]
        };
        let (key_y, sigma) = match y {
            None => (usize::MAX, 0),
            Some(y) => {
                let (yc, s) = m.canon_vertex(id, m.sym.perm(pi)[y]);
                (yc, s)
            }
        };
        let weights = m.robber.get(&(id, key_y))?;
        let total: f64 = weights.iter().map(|e| e.1).sum();
        let back = |z: usize| {
            let z = if y.is_some() { inv(sigma, z) } else { z };
            inv(pi, z)
        };
        if total > 1e-9 {
            let d: Vec<(f64, usize)> = weights
                .iter()
                .filter(|e| e.1 / total > 1e-12)
                .map(|&(z, w)| (w / total, back(z)))
                .collect();
            return Some(d);
        }
        // off the equilibrium path: take the reply with the largest primal value
        let best = weights
            .iter()
            .map(|&(z, _)| {
                let (zc, _) = m.canon_vertex(id, z);
                let v = m.after_move.get(&(id, zc)).copied().unwrap_or(0.0);
                (v, z)
            })
            .fold(None::<(f64, usize)>, |acc, (v, z)| match acc {
                Some((bv, _)) if bv >= v - 1e-12 => acc,
                _ => Some((v, z)),
            })?;
        Some(vec![(1.0, back(best.1))])
    }
}

impl RobberStrategy for TableRobber {
    type State = Vec<CopConfig>;

    fn name(&self) -> String {
        "lp-table-robber".into()
    }

    fn place(&self, g: &Graph, cops: &CopConfig) -> Result<Dist<usize, Vec<CopConfig>>> {
        let hist = vec![cops.clone()];
        let d = match self.choose(&hist, None) {
            Some(d) if !d.is_empty() => d,
            _ => vec![(1.0, (0..g.n()).find(|&v| !cops.contains(v)).unwrap_or(0))],
        };
        let mut grouped: Vec<(f64, usize)> = Vec::new();
        for (p, y) in d {
            match grouped.iter_mut().find(|e| e.1 == y) {
                Some(e) => e.0 += p,
                None => grouped.push((p, y)),
            }
        }
        Ok(grouped.into_iter().map(|(p, y)| (p, y, hist.clone())).collect())
    }

    fn respond(&self, g: &Graph, cops: &CopConfig, robber: usize, hist: &Vec<CopConfig>) -> Result<Dist<usize, Vec<CopConfig>>> {
        let m = &self.model;
        let mut h = hist.clone();
        if h.len() < m.horizon {
            h.push(cops.clone());
        }
        let safe = robber_moves(g, robber, cops, m.rules.speed, m.rules.moves);
        let chosen = if h.len() == hist.len() {
            None
        } else {
            self.choose(&h, Some(robber))
        };
        let d = match chosen {
            Some(d) if !d.is_empty() => d,
            _ => vec![(1.0, safe.first().copied().unwrap_or(robber))],
        };
        let mut grouped: Vec<(f64, usize)> = Vec::new();
        for (p, y) in d {
            match grouped.iter_mut().find(|e| e.1 == y) {
                Some(e) => e.0 += p,
                None => grouped.push((p, y)),
            }
        }
        Ok(grouped.into_iter().map(|(p, y)| (p, y, h.clone())).collect())
    }
}
