//! Unit-capacity flow on the vertex-split network.
//!
//! Every vertex `v` becomes `v_in -> v_out` with capacity one, every usable arc
//! `(a, b)` becomes `a_out -> b_in`. A super source feeds the requested sources and
//! the sink is the target's in-node, so a flow of value `f` decomposes into `f`
//! paths that share no vertex other than the target (and the source, when a single
//! shared source is requested).

use std::collections::VecDeque;

use crate::digraph::{ArcId, DiPath, Digraph, Vertex};

const UNBOUNDED: u32 = u32::MAX / 2;

struct Edge {
    to: usize,
    cap: u32,
    orig: u32,
    arc: Option<ArcId>,
}

struct Network {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Network {
    fn with_nodes(n: usize) -> Self {
        Self { edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    fn add(&mut self, from: usize, to: usize, cap: u32, arc: Option<ArcId>) {
        let id = self.edges.len();
        self.edges.push(Edge { to, cap, orig: cap, arc });
        self.edges.push(Edge { to: from, cap: 0, orig: 0, arc: None });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
    }

    /// One BFS augmentation of a single unit; false when the sink is unreachable.
    fn augment(&mut self, source: usize, sink: usize, pred: &mut [usize]) -> bool {
        pred.fill(usize::MAX);
        let mut queue = VecDeque::from([source]);
        let mut seen = vec![false; self.adj.len()];
        seen[source] = true;
        while let Some(x) = queue.pop_front() {
            if x == sink {
                break;
            }
            for &e in &self.adj[x] {
                let to = self.edges[e].to;
                if self.edges[e].cap > 0 && !seen[to] {
                    seen[to] = true;
                    pred[to] = e;
                    queue.push_back(to);
                }
            }
        }
        if !seen[sink] {
            return false;
        }
        let mut x = sink;
        while x != source {
            let e = pred[x];
            self.edges[e].cap -= 1;
            self.edges[e ^ 1].cap += 1;
            x = self.edges[e ^ 1].to;
        }
        true
    }

    fn flow_on(&self, e: usize) -> u32 {
        self.edges[e].orig - self.edges[e].cap
    }
}

/// Pairwise internally disjoint paths into `target`.
///
/// With `shared_source`, `sources` must hold a single vertex which every path
/// starts from; otherwise each source starts at most one path and sources are
/// treated like any other capacity-one vertex. Vertices flagged in `blocked` and
/// arcs rejected by `arc_ok` are unusable. At most `limit` paths are returned,
/// and a maximum system when `limit` is not reached.
pub(crate) fn route(
    g: &Digraph,
    sources: &[Vertex],
    shared_source: bool,
    target: Vertex,
    blocked: &[bool],
    arc_ok: impl Fn(ArcId) -> bool,
    limit: usize,
) -> Vec<DiPath> {
    let n = g.vertex_count();
    debug_assert!(blocked.is_empty() || blocked.len() == n);
    debug_assert!(!shared_source || sources.len() == 1);
    let is_blocked = |v: Vertex| !blocked.is_empty() && blocked[v];
    if is_blocked(target) {
        return Vec::new();
    }
    let mut is_source = vec![false; n];
    for &s in sources {
        is_source[s] = true;
    }
    let super_source = 2 * n;
    let mut net = Network::with_nodes(2 * n + 1);
    for v in 0..n {
        if v == target || is_blocked(v) {
            continue;
        }
        let cap = if shared_source && is_source[v] { UNBOUNDED } else { 1 };
        net.add(2 * v, 2 * v + 1, cap, None);
    }
    for &s in sources {
        if s != target && !is_blocked(s) {
            net.add(super_source, 2 * s, if shared_source { UNBOUNDED } else { 1 }, None);
        }
    }
    for (id, &(a, b)) in g.arcs().iter().enumerate() {
        if a == target || is_source[b] || is_blocked(a) || is_blocked(b) || !arc_ok(id) {
            continue;
        }
        net.add(2 * a + 1, 2 * b, 1, Some(id));
    }

    let sink = 2 * target;
    let mut pred = vec![usize::MAX; net.adj.len()];
    let mut value = 0;
    while value < limit && net.augment(super_source, sink, &mut pred) {
        value += 1;
    }

    // Peel off one path per unit leaving the super source.
    let mut consumed = vec![0u32; net.edges.len()];
    let mut paths = Vec::with_capacity(value);
    for &first in &net.adj[super_source] {
        let units = net.flow_on(first);
        for _ in 0..units {
            let start = net.edges[first].to / 2;
            let mut arcs = Vec::new();
            let mut v = start;
            while v != target {
                let out = 2 * v + 1;
                let e = net.adj[out]
                    .iter()
                    .copied()
                    .find(|&e| net.edges[e].arc.is_some() && net.flow_on(e) > consumed[e])
                    .expect("flow conservation");
                consumed[e] += 1;
                let a = net.edges[e].arc.unwrap();
                arcs.push(a);
                v = g.head(a);
            }
            paths.push(DiPath::from_arcs(g, start, arcs));
        }
    }
    paths
}
