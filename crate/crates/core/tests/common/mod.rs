#![allow(dead_code)]

use rand::Rng;
use spindle::{DiPath, Digraph, Vertex};

/// Each ordered pair gets an arc with probability `p`; a few arcs are doubled.
pub fn random_digraph(rng: &mut impl Rng, n: usize, p: f64) -> Digraph {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                arcs.push((u, v));
                if rng.gen_bool(0.05) {
                    arcs.push((u, v));
                }
            }
        }
    }
    Digraph::new(n, arcs).unwrap()
}

/// Random acyclic digraph whose arcs follow a shuffled vertex order.
pub fn random_dag(rng: &mut impl Rng, n: usize, p: f64) -> Digraph {
    use rand::seq::SliceRandom;
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(rng);
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                arcs.push((order[i], order[j]));
                if rng.gen_bool(0.05) {
                    arcs.push((order[i], order[j]));
                }
            }
        }
    }
    Digraph::new(n, arcs).unwrap()
}

/// Every simple path with at least one arc, as a vertex list.
pub fn simple_paths(g: &Digraph) -> Vec<Vec<Vertex>> {
    fn go(g: &Digraph, path: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        if path.len() > 1 {
            out.push(path.clone());
        }
        for w in g.out_neighbors(*path.last().unwrap()) {
            if !path.contains(&w) {
                path.push(w);
                go(g, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for v in 0..g.vertex_count() {
        go(g, &mut vec![v], &mut out);
    }
    out
}

/// Largest number of pairwise disjoint masks.
pub fn max_disjoint(masks: &[u64]) -> usize {
    let mut masks = masks.to_vec();
    masks.sort_unstable();
    masks.dedup();
    fn go(masks: &[u64], used: u64, from: usize) -> usize {
        let mut best = 0;
        for i in from..masks.len() {
            if masks[i] & used == 0 {
                best = best.max(1 + go(masks, used | masks[i], i + 1));
            }
        }
        best
    }
    go(&masks, 0, 0)
}

/// Maximum number of vertex-disjoint nontrivial X-to-Y paths, by enumeration.
pub fn brute_xy_paths(g: &Digraph, xs: &[Vertex], ys: &[Vertex]) -> usize {
    let masks: Vec<u64> = simple_paths(g)
        .into_iter()
        .filter(|p| xs.contains(&p[0]) && ys.contains(p.last().unwrap()))
        .map(|p| p.iter().fold(0u64, |m, &v| m | 1 << v))
        .collect();
    max_disjoint(&masks)
}

pub fn hamiltonian(g: &Digraph, s: Vertex, t: Vertex) -> bool {
    let n = g.vertex_count();
    simple_paths(g).iter().any(|p| p.len() == n && p[0] == s && p[n - 1] == t)
}

/// Checks that `paths` are vertex-disjoint nontrivial X-to-Y paths of `g`.
pub fn valid_xy_paths(g: &Digraph, xs: &[Vertex], ys: &[Vertex], paths: &[DiPath]) -> bool {
    let mut seen = vec![false; g.vertex_count()];
    paths.iter().all(|p| {
        p.is_valid_in(g)
            && !p.is_empty()
            && xs.contains(&p.first())
            && ys.contains(&p.last())
            && p.vertices.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    })
}
