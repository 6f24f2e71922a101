//! Undirected simple connected graphs, the standard families, and basic metrics.
//!
//! Family generators fix vertex ids so results are reproducible:
//! star center is `0`; trees are numbered in BFS order from the root (children of
//! `v` are `d*v+1 ..= d*v+d`); grids are row-major; the broom path runs from the
//! end (`0`) to the center (`path_len - 1`), followed by the star leaves.

use std::collections::VecDeque;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Path { n: usize },
    Cycle { n: usize },
    /// `S_N`: a center joined to `leaves` leaves.
    Star { leaves: usize },
    /// Complete `d`-ary tree of depth `depth`.
    Tree { d: usize, depth: usize },
    /// `side x side` grid.
    Grid { side: usize },
    /// Path of `floor(c*n)` vertices whose last vertex is the hub of a star.
    Broom { c: f64, n: usize },
    Custom,
}

impl Family {
    pub fn is_tree(&self) -> bool {
        matches!(
            self,
            Family::Path { .. } | Family::Star { .. } | Family::Tree { .. } | Family::Broom { .. }
        )
    }

    pub fn build(&self) -> Result<Graph> {
        match *self {
            Family::Path { n } => path(n),
            Family::Cycle { n } => cycle(n),
            Family::Star { leaves } => star(leaves),
            Family::Tree { d, depth } => complete_tree(d, depth),
            Family::Grid { side } => grid(side),
            Family::Broom { c, n } => broom(c, n),
            Family::Custom => Err(Error::param("custom graphs are loaded from edge lists")),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Path { n } => write!(f, "path:{n}"),
            Family::Cycle { n } => write!(f, "cycle:{n}"),
            Family::Star { leaves } => write!(f, "star:{leaves}"),
            Family::Tree { d, depth } => write!(f, "tree:d={d},L={depth}"),
            Family::Grid { side } => write!(f, "grid:{side}"),
            Family::Broom { c, n } => write!(f, "broom:c={c},n={n}"),
            Family::Custom => write!(f, "custom"),
        }
    }
}

fn parse_err(input: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        input: input.to_string(),
        reason: reason.into(),
    }
}

/// Parses `key=value` pairs separated by commas.
pub(crate) fn parse_kv(input: &str, body: &str) -> Result<Vec<(String, String)>> {
    body.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| parse_err(input, format!("expected key=value, got `{kv}`")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn num<T: FromStr>(input: &str, s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| parse_err(input, format!("`{s}` is not a valid number")))
}

impl FromStr for Family {
    type Err = Error;

    /// Accepts `path:5`, `cycle:6`, `star:3`, `tree:d=2,L=3`, `grid:5`, `broom:c=0.5,n=40`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, body) = s
            .split_once(':')
            .ok_or_else(|| parse_err(s, "expected `<family>:<params>`"))?;
        let fam = match name.trim() {
            "path" => Family::Path { n: num(s, body)? },
            "cycle" => Family::Cycle { n: num(s, body)? },
            "star" => Family::Star {
                leaves: num(s, body)?,
            },
            "grid" => Family::Grid { side: num(s, body)? },
            "tree" => {
                let (mut d, mut depth) = (None, None);
                for (k, v) in parse_kv(s, body)? {
                    match k.as_str() {
                        "d" => d = Some(num(s, &v)?),
                        "L" | "l" | "depth" => depth = Some(num(s, &v)?),
                        other => return Err(parse_err(s, format!("unknown key `{other}`"))),
                    }
                }
                Family::Tree {
                    d: d.ok_or_else(|| parse_err(s, "missing d"))?,
                    depth: depth.ok_or_else(|| parse_err(s, "missing L"))?,
                }
            }
            "broom" => {
                let (mut c, mut n) = (None, None);
                for (k, v) in parse_kv(s, body)? {
                    match k.as_str() {
                        "c" => c = Some(num(s, &v)?),
                        "n" => n = Some(num(s, &v)?),
                        other => return Err(parse_err(s, format!("unknown key `{other}`"))),
                    }
                }
                Family::Broom {
                    c: c.ok_or_else(|| parse_err(s, "missing c"))?,
                    n: n.ok_or_else(|| parse_err(s, "missing n"))?,
                }
            }
            other => return Err(parse_err(s, format!("unknown family `{other}`"))),
        };
        Ok(fam)
    }
}

#[derive(Debug, Clone)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    family: Family,
    dist: OnceLock<Vec<Vec<u32>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphMetrics {
    pub n: usize,
    pub max_degree: usize,
    pub min_degree: usize,
    pub diameter: usize,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops, repeated edges,
    /// out-of-range endpoints and disconnected inputs.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph must have at least one vertex".into()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) out of range for n={n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (v, nb) in adj.iter_mut().enumerate() {
            nb.sort_unstable();
            if nb.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!("repeated edge at vertex {v}")));
            }
        }
        let g = Graph {
            adj,
            family: Family::Custom,
            dist: OnceLock::new(),
        };
        if g.bfs(0).iter().any(|d| *d == u32::MAX) {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    fn tagged(mut self, family: Family) -> Self {
        self.family = family;
        self
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    fn bfs(&self, src: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// All-pairs shortest path lengths, computed once.
    pub fn distances(&self) -> &[Vec<u32>] {
        self.dist
            .get_or_init(|| (0..self.n()).map(|s| self.bfs(s)).collect())
    }

    pub fn distance(&self, u: usize, v: usize) -> usize {
        self.distances()[u][v] as usize
    }

    /// Next vertex on a shortest path from `from` to `to` (lowest index on ties).
    pub fn step_toward(&self, from: usize, to: usize) -> usize {
        if from == to {
            return from;
        }
        let d = self.distances();
        self.adj[from]
            .iter()
            .copied()
            .find(|&v| d[v][to] + 1 == d[from][to])
            .expect("connected graph has a shortest path")
    }

    pub fn metrics(&self) -> GraphMetrics {
        let degrees = self.adj.iter().map(Vec::len);
        let max_degree = degrees.clone().max().unwrap_or(0);
        let min_degree = degrees.min().unwrap_or(0);
        let diameter = self
            .distances()
            .iter()
            .flat_map(|row| row.iter().copied())
            .max()
            .unwrap_or(0) as usize;
        GraphMetrics {
            n: self.n(),
            max_degree,
            min_degree,
            diameter,
        }
    }

    /// Reads the plain-text edge list format: first line `n`, then `u v` per line.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| parse_err("edge list", "empty input"))?;
        let n: usize = num(header, header)?;
        let mut edges = Vec::new();
        for line in lines {
            let mut parts = line.split_whitespace();
            let (Some(u), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(parse_err(line, "expected `u v`"));
            };
            edges.push((num(line, u)?, num(line, v)?));
        }
        Graph::from_edges(n, &edges)
    }

    pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Self> {
        Graph::parse_edge_list(&std::fs::read_to_string(path)?)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Resolves a graph spec: either a family descriptor or `file:<path>`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        match spec.strip_prefix("file:") {
            Some(path) => Graph::read_edge_list(path),
            None => spec.parse::<Family>()?.build(),
        }
    }

    /// Name used in reports: the family descriptor, or `custom(n=..)`.
    pub fn label(&self) -> String {
        match self.family {
            Family::Custom => format!("custom(n={})", self.n()),
            ref f => f.to_string(),
        }
    }

    /// Layer of a vertex in a complete tree (root is layer 0).
    pub fn tree_layer(&self, v: usize) -> Option<usize> {
        let Family::Tree { d, .. } = self.family else {
            return None;
        };
        let (mut layer, mut first, mut width) = (0, 0, 1);
        while v >= first + width {
            first += width;
            width *= d;
            layer += 1;
        }
        Some(layer)
    }
}

pub fn path(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::param("path needs n >= 1"));
    }
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Ok(Graph::from_edges(n, &edges)?.tagged(Family::Path { n }))
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::param("cycle needs n >= 3"));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Ok(Graph::from_edges(n, &edges)?.tagged(Family::Cycle { n }))
}

pub fn star(leaves: usize) -> Result<Graph> {
    if leaves == 0 {
        return Err(Error::param("star needs N >= 1 leaves"));
    }
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    Ok(Graph::from_edges(leaves + 1, &edges)?.tagged(Family::Star { leaves }))
}

/// Number of vertices of the complete `d`-ary tree of depth `depth`.
pub fn tree_size(d: usize, depth: usize) -> usize {
    (0..=depth).map(|l| d.pow(l as u32)).sum()
}

pub fn complete_tree(d: usize, depth: usize) -> Result<Graph> {
    if d < 2 || depth < 1 {
        return Err(Error::param("tree needs d >= 2 and L >= 1"));
    }
    let n = tree_size(d, depth);
    let edges: Vec<_> = (1..n).map(|v| ((v - 1) / d, v)).collect();
    Ok(Graph::from_edges(n, &edges)?.tagged(Family::Tree { d, depth }))
}

pub fn grid(side: usize) -> Result<Graph> {
    if side < 2 {
        return Err(Error::param("grid needs N >= 2"));
    }
    let id = |r: usize, c: usize| r * side + c;
    let mut edges = Vec::new();
    for r in 0..side {
        for c in 0..side {
            if c + 1 < side {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < side {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Ok(Graph::from_edges(side * side, &edges)?.tagged(Family::Grid { side }))
}

/// Number of path vertices (center included) in `B(c, n)`.
pub fn broom_path_len(c: f64, n: usize) -> usize {
    // guard against 0.5*400 = 199.999..
    ((c * n as f64) + 1e-9).floor() as usize
}

pub fn broom(c: f64, n: usize) -> Result<Graph> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::param(format!("broom needs 0 < c <= 1, got {c}")));
    }
    let p = broom_path_len(c, n);
    if p == 0 || n < 2 {
        return Err(Error::param(format!(
            "broom c={c}, n={n} has no path vertices"
        )));
    }
    let center = p - 1;
    let mut edges: Vec<_> = (1..p).map(|i| (i - 1, i)).collect();
    edges.extend((p..n).map(|leaf| (center, leaf)));
    Ok(Graph::from_edges(n, &edges)?.tagged(Family::Broom { c, n }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_has_center_zero() {
        let g = star(3).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 3);
        assert!(g.edges().all(|(u, _)| u == 0));
        let m = g.metrics();
        assert_eq!((m.max_degree, m.min_degree, m.diameter), (3, 1, 2));
    }

    #[test]
    fn tree_size_matches_formula() {
        let g = complete_tree(2, 2).unwrap();
        assert_eq!(g.n(), 7);
        for d in 2..5usize {
            for l in 1..5usize {
                let g = complete_tree(d, l).unwrap();
                assert_eq!(g.n(), (d.pow(l as u32 + 1) - 1) / (d - 1));
                assert_eq!(g.tree_layer(g.n() - 1), Some(l));
            }
        }
        let g = complete_tree(3, 2).unwrap();
        assert_eq!(g.tree_layer(0), Some(0));
        assert_eq!(g.tree_layer(3), Some(1));
        assert_eq!(g.tree_layer(4), Some(2));
    }

    #[test]
    fn single_vertex_path() {
        let g = path(1).unwrap();
        assert_eq!((g.n(), g.edge_count()), (1, 0));
        assert_eq!(g.metrics().diameter, 0);
    }

    #[test]
    fn grid_and_cycle_metrics() {
        let m = grid(5).unwrap().metrics();
        assert_eq!((m.max_degree, m.min_degree, m.diameter), (4, 2, 8));
        let m = cycle(6).unwrap().metrics();
        assert_eq!((m.max_degree, m.min_degree, m.diameter), (2, 2, 3));
    }

    #[test]
    fn broom_layout() {
        let g = broom(0.5, 40).unwrap();
        assert_eq!(g.n(), 40);
        assert_eq!(g.degree(0), 1);
        assert_eq!(g.degree(19), 1 + 20 + 1 - 1);
        assert_eq!(g.distance(0, 39), 20);
        let g = broom(1.0, 5).unwrap();
        assert_eq!(g.metrics().diameter, 4);
        assert!(broom(0.0, 10).is_err());
        assert!(broom(0.05, 10).is_err());
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(Graph::from_edges(3, &[(0, 1)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 2)]).is_err());
        assert!(star(0).is_err());
        assert!(complete_tree(1, 3).is_err());
        assert!(grid(1).is_err());
    }

    #[test]
    fn parses_descriptors() {
        for s in ["star:3", "tree:d=2,L=3", "grid:5", "broom:c=0.5,n=40", "cycle:5", "path:4"] {
            let fam: Family = s.parse().unwrap();
            assert_eq!(fam.to_string(), s);
        }
        assert!("tree:d=2".parse::<Family>().is_err());
        assert!("blob:3".parse::<Family>().is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = cycle(5).unwrap();
        let h = Graph::parse_edge_list(&g.to_edge_list()).unwrap();
        assert_eq!(h.n(), 5);
        assert_eq!(h.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
        assert!(Graph::parse_edge_list("3\n0 1\n").is_err());
        assert!(Graph::parse_edge_list("2\n0 1 5\n").is_err());
    }
}
