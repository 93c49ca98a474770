//! Vertex-disjoint nontrivial X -> Y paths through a matching gadget.
//!
//! Every vertex `v` outside `X ∪ Y` gets a copy `v'` joined to it; an arc
//! `(a, b)` becomes the edge `{a, b'}` when `b` has a copy and `{a, b}`
//! otherwise. A matching that saturates all `{v, v'}` pairs corresponds to the
//! empty path system, and every additional matching edge buys one path.

use std::collections::BTreeSet;

use super::matching::{max_matching, Matching, UndirectedGraph};
use crate::digraph::{ArcId, DiPath, Digraph, Vertex};

/// Which digraph vertex a gadget vertex stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Vertex(Vertex),
    Copy(Vertex),
}

#[derive(Clone, Debug)]
pub struct SplitGadget {
    graph: UndirectedGraph,
    origin: Vec<Origin>,
    x: BTreeSet<Vertex>,
    y: BTreeSet<Vertex>,
    /// Arc behind each gadget edge; `None` for the `{v, v'}` edges.
    edge_arc: Vec<Option<ArcId>>,
    copies: usize,
}

impl SplitGadget {
    pub fn graph(&self) -> &UndirectedGraph {
        &self.graph
    }

    pub fn origin(&self, w: usize) -> Origin {
        self.origin[w]
    }

    pub fn x(&self) -> &BTreeSet<Vertex> {
        &self.x
    }

    pub fn y(&self) -> &BTreeSet<Vertex> {
        &self.y
    }

    pub fn edge_arc(&self, e: usize) -> Option<ArcId> {
        self.edge_arc[e]
    }

    /// Number of vertices outside `X ∪ Y`, i.e. of copies.
    pub fn copy_count(&self) -> usize {
        self.copies
    }
}

/// Builds the gadget after dropping arcs into `X \ Y` and out of `Y \ X`.
pub fn build_split_graph(g: &Digraph, xs: &[Vertex], ys: &[Vertex]) -> SplitGadget {
    build_filtered(g, xs, ys, |_| true)
}

pub(crate) fn build_filtered(g: &Digraph, xs: &[Vertex], ys: &[Vertex], arc_ok: impl Fn(ArcId) -> bool) -> SplitGadget {
    let n = g.vertex_count();
    let x: BTreeSet<Vertex> = xs.iter().copied().collect();
    let y: BTreeSet<Vertex> = ys.iter().copied().collect();
    let mut origin: Vec<Origin> = (0..n).map(Origin::Vertex).collect();
    let mut copy_of = vec![usize::MAX; n];
    for v in 0..n {
        if !x.contains(&v) && !y.contains(&v) {
            copy_of[v] = origin.len();
            origin.push(Origin::Copy(v));
        }
    }

    let mut edges = Vec::new();
    let mut edge_arc = Vec::new();
    for v in 0..n {
        if copy_of[v] != usize::MAX {
            edges.push((v, copy_of[v]));
            edge_arc.push(None);
        }
    }
    for (id, &(a, b)) in g.arcs().iter().enumerate() {
        let into_x_only = x.contains(&b) && !y.contains(&b);
        let out_of_y_only = y.contains(&a) && !x.contains(&a);
        if into_x_only || out_of_y_only || !arc_ok(id) {
            continue;
        }
        let other = if copy_of[b] == usize::MAX { b } else { copy_of[b] };
        edges.push((a, other));
        edge_arc.push(Some(id));
    }

    let copies = origin.len() - n;
    let graph = UndirectedGraph::new(origin.len(), edges).expect("gadget edges are in range");
    SplitGadget { graph, origin, x, y, edge_arc, copies }
}

/// Maximum number of pairwise vertex-disjoint directed paths, each starting in
/// `X`, ending in `Y` and having distinct ends, with one optimal system.
pub fn max_nontrivial_xy_paths(g: &Digraph, xs: &[Vertex], ys: &[Vertex]) -> (usize, Vec<DiPath>) {
    nontrivial_paths_filtered(g, xs, ys, |_| true)
}

pub(crate) fn nontrivial_paths_filtered(
    g: &Digraph,
    xs: &[Vertex],
    ys: &[Vertex],
    arc_ok: impl Fn(ArcId) -> bool,
) -> (usize, Vec<DiPath>) {
    let gadget = build_filtered(g, xs, ys, arc_ok);
    let m = max_matching(&gadget.graph);
    let count = m.len().saturating_sub(gadget.copies);
    let paths = paths_from_matching(g, &gadget, &m);
    debug_assert_eq!(paths.len(), count);
    (count, paths)
}

/// Reads the path system off the components of `M △ N`, `N` being the
/// matching of all `{v, v'}` edges, that contain more edges of `M`.
fn paths_from_matching(g: &Digraph, gadget: &SplitGadget, m: &Matching) -> Vec<DiPath> {
    let size = gadget.graph.vertex_count();
    // In M △ N every vertex has degree at most 2: one M edge, one N edge.
    let mut m_edge = vec![usize::MAX; size];
    for &e in &m.edges {
        if gadget.edge_arc[e].is_none() {
            continue; // in both M and N
        }
        let (a, b) = gadget.graph.edge(e);
        m_edge[a] = e;
        m_edge[b] = e;
    }
    let mut n_partner = vec![usize::MAX; size];
    for e in 0..gadget.copies {
        let (v, c) = gadget.graph.edge(e);
        if m_edge[v] != usize::MAX || m_edge[c] != usize::MAX {
            n_partner[v] = c;
            n_partner[c] = v;
        }
    }

    let mut seen = vec![false; size];
    let mut paths = Vec::new();
    for start in 0..size {
        let degree = usize::from(m_edge[start] != usize::MAX) + usize::from(n_partner[start] != usize::MAX);
        if seen[start] || degree != 1 {
            continue;
        }
        // walk the path component, alternating edge kinds
        let mut arcs = Vec::new();
        let mut n_edges = 0usize;
        let mut cur = start;
        let mut use_m = m_edge[start] != usize::MAX;
        loop {
            seen[cur] = true;
            let next = if use_m {
                let e = m_edge[cur];
                if e == usize::MAX {
                    break;
                }
                arcs.push(gadget.edge_arc[e].unwrap());
                let (a, b) = gadget.graph.edge(e);
                if a == cur {
                    b
                } else {
                    a
                }
            } else {
                let p = n_partner[cur];
                if p == usize::MAX {
                    break;
                }
                n_edges += 1;
                p
            };
            cur = next;
            use_m = !use_m;
        }
        seen[cur] = true;
        if arcs.len() <= n_edges {
            continue;
        }
        // the walk may have gone head-to-tail; orient by the first arc
        let origin_of = |w: usize| match gadget.origin[w] {
            Origin::Vertex(v) | Origin::Copy(v) => v,
        };
        if g.tail(arcs[0]) != origin_of(start) {
            arcs.reverse();
        }
        let path = DiPath::from_arcs(g, g.tail(arcs[0]), arcs);
        debug_assert!(path.is_valid_in(g));
        paths.push(path);
    }
    paths.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    paths
}

#[cfg(test)]
mod tests {
    use super::*;

    // u1=0 u2=1 u3=2 u4=3 v1=4 v2=5 v3=6
    fn gadget7() -> (Digraph, Vec<Vertex>, Vec<Vertex>) {
        let g = Digraph::new(7, vec![(0, 4), (4, 2), (1, 6), (6, 3), (2, 5), (5, 6)]).unwrap();
        (g, vec![0, 1, 2], vec![2, 3])
    }

    #[test]
    fn gadget7_gadget_shape() {
        let (g, x, y) = gadget7();
        let gadget = build_split_graph(&g, &x, &y);
        assert_eq!(gadget.graph().vertex_count(), 10);
        assert_eq!(gadget.copy_count(), 3);
        for e in 0..3 {
            let (v, c) = gadget.graph().edge(e);
            assert_eq!(gadget.origin(c), Origin::Copy(v));
        }
        assert_eq!(max_matching(gadget.graph()).len(), 5);
    }

    #[test]
    fn gadget7_paths() {
        let (g, x, y) = gadget7();
        let (count, paths) = max_nontrivial_xy_paths(&g, &x, &y);
        assert_eq!(count, 2);
        let verts: Vec<_> = paths.iter().map(|p| p.vertices.clone()).collect();
        assert_eq!(verts, vec![vec![0, 4, 2], vec![1, 6, 3]]);
    }

    #[test]
    fn single_arc() {
        let g = Digraph::new(2, vec![(0, 1)]).unwrap();
        let (count, paths) = max_nontrivial_xy_paths(&g, &[0], &[1]);
        assert_eq!(count, 1);
        assert_eq!(paths[0].vertices, vec![0, 1]);
    }

    #[test]
    fn no_copies_when_sets_cover_everything() {
        let g = Digraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let all = [0, 1, 2];
        let gadget = build_split_graph(&g, &all, &all);
        assert_eq!(gadget.copy_count(), 0);
        assert_eq!(gadget.graph().vertex_count(), 3);
        assert!((0..gadget.graph().edges().len()).all(|e| gadget.edge_arc(e).is_some()));
    }

    #[test]
    fn arcs_into_x_only_are_dropped() {
        let g = Digraph::new(3, vec![(2, 0), (0, 1)]).unwrap();
        let gadget = build_split_graph(&g, &[0], &[1]);
        let arcs: Vec<_> = (0..gadget.graph().edges().len()).filter_map(|e| gadget.edge_arc(e)).collect();
        assert_eq!(arcs, vec![1]);
    }

    #[test]
    fn antiparallel_pair_inside_x_and_y() {
        let g = Digraph::new(2, vec![(1, 0), (0, 1)]).unwrap();
        let (count, paths) = max_nontrivial_xy_paths(&g, &[0, 1], &[0, 1]);
        assert_eq!(count, 1);
        assert_eq!(paths[0].len(), 1);
    }
}
