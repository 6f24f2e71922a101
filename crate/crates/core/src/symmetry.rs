//! Graph automorphisms used to collapse symmetric states in the exact solvers.

use crate::game::CopConfig;
use crate::graph::Graph;

/// Largest automorphism group enumerated; bigger groups fall back to the identity.
pub const DEFAULT_GROUP_CAP: usize = 20_160;

/// A list of vertex permutations closed under composition (the identity comes first).
#[derive(Debug, Clone)]
pub struct Symmetry {
    perms: Vec<Vec<usize>>,
}

impl Symmetry {
    pub fn trivial(n: usize) -> Self {
        Symmetry {
            perms: vec![(0..n).collect()],
        }
    }

    /// Enumerates the automorphism group by backtracking, giving up (and returning
    /// the trivial group) once more than `cap` automorphisms are found.
    pub fn of_graph(g: &Graph, cap: usize) -> Self {
        let n = g.n();
        let order = bfs_order(g);
        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; n];
        let mut perms = Vec::new();
        let complete = extend(g, &order, 0, &mut image, &mut used, &mut perms, cap);
        if !complete {
            return Symmetry::trivial(n);
        }
        let identity: Vec<usize> = (0..n).collect();
        perms.sort();
        if let Some(pos) = perms.iter().position(|p| *p == identity) {
            perms.swap(0, pos);
        }
        Symmetry { perms }
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.perms.len() == 1
    }

    pub fn perm(&self, i: usize) -> &[usize] {
        &self.perms[i]
    }

    pub fn apply(&self, i: usize, cfg: &CopConfig) -> CopConfig {
        CopConfig::new(cfg.iter().map(|&v| self.perms[i][v]).collect())
    }

    /// Lexicographically smallest image of a configuration.
    pub fn canonical_config(&self, cfg: &CopConfig) -> CopConfig {
        (0..self.len())
            .map(|i| self.apply(i, cfg))
            .min()
            .expect("group is nonempty")
    }

    /// Lexicographically smallest image of a configuration sequence, with one
    /// permutation realizing it.
    pub fn canonical_history(&self, hist: &[CopConfig]) -> (Vec<CopConfig>, usize) {
        let mut best: Option<(Vec<CopConfig>, usize)> = None;
        for i in 0..self.len() {
            let img: Vec<CopConfig> = hist.iter().map(|c| self.apply(i, c)).collect();
            if best.as_ref().map_or(true, |(b, _)| img < *b) {
                best = Some((img, i));
            }
        }
        best.expect("group is nonempty")
    }

    /// Indices of the permutations fixing every configuration in `hist`.
    pub fn stabilizer(&self, hist: &[CopConfig]) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| hist.iter().all(|c| self.apply(i, c) == *c))
            .collect()
    }

    /// Index of the inverse permutation.
    pub fn inverse(&self, i: usize) -> usize {
        let p = &self.perms[i];
        let mut inv = vec![0; p.len()];
        for (v, &w) in p.iter().enumerate() {
            inv[w] = v;
        }
        self.perms
            .iter()
            .position(|q| *q == inv)
            .expect("group is closed under inverses")
    }
}

fn bfs_order(g: &Graph) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    let mut order = vec![0];
    seen[0] = true;
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &v in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                order.push(v);
            }
        }
    }
    order
}

fn extend(
    g: &Graph,
    order: &[usize],
    depth: usize,
    image: &mut [usize],
    used: &mut [bool],
    out: &mut Vec<Vec<usize>>,
    cap: usize,
) -> bool {
    if depth == order.len() {
        out.push(image.to_vec());
        return out.len() <= cap;
    }
    let v = order[depth];
    for w in 0..g.n() {
        if used[w] || g.degree(w) != g.degree(v) {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&u| g.has_edge(u, v) == g.has_edge(image[u], w));
        if !consistent {
            continue;
        }
        image[v] = w;
        used[w] = true;
        let ok = extend(g, order, depth + 1, image, used, out, cap);
        used[w] = false;
        image[v] = usize::MAX;
        if !ok {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    #[test]
    fn group_orders() {
        let cases = [
            (graph::star(3).unwrap(), 6),
            (graph::path(4).unwrap(), 2),
            (graph::cycle(5).unwrap(), 10),
            (graph::grid(3).unwrap(), 8),
            (graph::complete_tree(2, 2).unwrap(), 8),
        ];
        for (g, order) in cases {
            assert_eq!(Symmetry::of_graph(&g, DEFAULT_GROUP_CAP).len(), order, "{}", g.label());
        }
    }

    #[test]
    fn cap_falls_back_to_identity() {
        let g = graph::star(6).unwrap();
        assert!(Symmetry::of_graph(&g, 100).is_trivial());
    }

    #[test]
    fn canonical_forms_agree_on_orbits() {
        let g = graph::cycle(6).unwrap();
        let sym = Symmetry::of_graph(&g, DEFAULT_GROUP_CAP);
        let a = CopConfig::new(vec![1, 3]);
        let b = CopConfig::new(vec![2, 4]);
        assert_eq!(sym.canonical_config(&a), sym.canonical_config(&b));
        assert_eq!(sym.canonical_config(&a), CopConfig::new(vec![0, 2]));
        let (h, _) = sym.canonical_history(&[CopConfig::new(vec![3]), CopConfig::new(vec![4])]);
        assert_eq!(h, vec![CopConfig::new(vec![0]), CopConfig::new(vec![1])]);
        let stab = sym.stabilizer(&[CopConfig::new(vec![0])]);
        assert_eq!(stab.len(), 2);
        for i in 0..sym.len() {
            let j = sym.inverse(i);
            assert_eq!(sym.perm(j)[sym.perm(i)[2]], 2);
        }
    }
}
