//! Maximum-cardinality matching in general graphs (Edmonds' blossom algorithm).

use std::collections::VecDeque;

use crate::error::{invalid, Result};

/// Undirected multigraph on `0..n` without loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl UndirectedGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (i, &(a, b)) in edges.iter().enumerate() {
            if a >= n || b >= n {
                return Err(invalid(format!("edge {i} = {{{a},{b}}} has an endpoint outside 0..{n}")));
            }
            if a == b {
                return Err(invalid(format!("edge {i} is a loop at {a}")));
            }
        }
        Ok(Self { n, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }
}

/// A set of pairwise disjoint edges, by edge id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    pub edges: Vec<usize>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_matching_of(&self, g: &UndirectedGraph) -> bool {
        let mut used = vec![false; g.vertex_count()];
        let mut seen_edge = vec![false; g.edges().len()];
        for &e in &self.edges {
            if e >= g.edges().len() || seen_edge[e] {
                return false;
            }
            seen_edge[e] = true;
            let (a, b) = g.edge(e);
            if used[a] || used[b] {
                return false;
            }
            used[a] = true;
            used[b] = true;
        }
        true
    }
}

const NONE: usize = usize::MAX;

struct Blossom<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Blossom<'_> {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.mate.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Grows an alternating tree from `root`; returns the free vertex reached, if any.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.mate.len();
        self.used.fill(false);
        self.parent.fill(NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in &self.adj[v] {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.fill(false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let ppv = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = ppv;
        }
    }
}

/// Maximum-cardinality matching, `O(V^3)`.
///
/// Between parallel edges the one with the smallest id is reported.
pub fn max_matching(g: &UndirectedGraph) -> Matching {
    let n = g.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in g.edges() {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }

    let mut mate = vec![NONE; n];
    // greedy start
    for &(a, b) in g.edges() {
        if mate[a] == NONE && mate[b] == NONE {
            mate[a] = b;
            mate[b] = a;
        }
    }

    let mut state = Blossom {
        adj: &adj,
        mate,
        parent: vec![NONE; n],
        base: (0..n).collect(),
        used: vec![false; n],
        in_blossom: vec![false; n],
        queue: VecDeque::new(),
    };
    for v in 0..n {
        if state.mate[v] == NONE {
            if let Some(free) = state.find_path(v) {
                state.augment(free);
            }
        }
    }

    let mut taken = vec![false; n];
    let mut edges = Vec::new();
    for (id, &(a, b)) in g.edges().iter().enumerate() {
        if state.mate[a] == b && !taken[a] && !taken[b] {
            taken[a] = true;
            taken[b] = true;
            edges.push(id);
        }
    }
    Matching { edges }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let g = UndirectedGraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let m = max_matching(&g);
        assert_eq!(m.len(), 1);
        assert!(m.is_matching_of(&g));
    }

    #[test]
    fn odd_cycle_with_stem_needs_blossom() {
        // 5-cycle 0..4 with pendant 5 on 0 and pendant 6 on 2: perfect-ish matching of 3
        let g = UndirectedGraph::new(7, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (2, 6)]).unwrap();
        assert_eq!(max_matching(&g).len(), 3);
    }

    #[test]
    fn petersen_is_perfect() {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        let g = UndirectedGraph::new(10, edges).unwrap();
        assert_eq!(max_matching(&g).len(), 5);
    }

    #[test]
    fn rejects_loops() {
        assert!(UndirectedGraph::new(2, vec![(1, 1)]).is_err());
        assert!(UndirectedGraph::new(2, vec![(0, 2)]).is_err());
    }

    #[test]
    fn parallel_edges_report_lowest_id() {
        let g = UndirectedGraph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        assert_eq!(max_matching(&g).edges, vec![0]);
    }
}
