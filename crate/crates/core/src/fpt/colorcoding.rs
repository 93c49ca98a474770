//! Randomised search for 2-spindles with exact path lengths.
//!
//! Under a colouring with `c >= a + b` colours, a spindle on `a + b` vertices
//! is found whenever it is colourful. Paths are grown as `(end, colour set)`
//! states; two colourful `u -> v` paths whose colour sets meet exactly in the
//! colours of `u` and `v` cannot share any other vertex.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::counter::Counter;
use crate::digraph::{ArcId, DiPath, Digraph, SpindleWitness, Vertex};

/// Widest colour set representable by the state masks.
pub const MAX_COLOURS: usize = 64;

/// `ceil(e^c * 20 * ln 2)`: misses a fixed spindle on `c` vertices with
/// probability at most `2^-20`.
pub fn default_trials(c: usize) -> usize {
    let t = ((c as f64).exp() * 20.0 * std::f64::consts::LN_2).ceil();
    if t >= usize::MAX as f64 {
        usize::MAX
    } else {
        t as usize
    }
}

/// Looks for a subgraph `(a, b)`-spindle with exactly these path lengths,
/// trying up to `trials` random colourings with `a + b` colours.
///
/// `None` is not a proof of absence.
pub fn find_exact_spindle_colorcoding(
    g: &Digraph,
    a: usize,
    b: usize,
    trials: usize,
    seed: u64,
) -> Option<SpindleWitness> {
    find_exact_counted(g, a, b, trials, seed, &Counter::new())
}

pub fn find_exact_counted(
    g: &Digraph,
    a: usize,
    b: usize,
    trials: usize,
    seed: u64,
    explored: &Counter,
) -> Option<SpindleWitness> {
    let n = g.vertex_count();
    let c = a + b;
    if a == 0 || b == 0 || n < c || c > MAX_COLOURS {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let colours: Vec<usize> = (0..n).map(|_| rng.gen_range(0..c)).collect();
        explored.bump();
        if let Some(w) = search_colouring(g, &colours, &[(a, b)], explored) {
            return Some(w);
        }
    }
    None
}

type Layer = BTreeMap<(Vertex, u64), (Vertex, ArcId)>;

/// One colouring: the first `(a, b)` in `pairs` (in order, per tail in
/// increasing order) realised by colourful paths.
pub(crate) fn search_colouring(
    g: &Digraph,
    colours: &[usize],
    pairs: &[(usize, usize)],
    explored: &Counter,
) -> Option<SpindleWitness> {
    let max_len = pairs.iter().map(|&(a, b)| a.max(b)).max()?;
    let n = g.vertex_count();
    (0..n).into_par_iter().find_map_first(|u| {
        if g.out_degree(u) == 0 {
            return None;
        }
        let layers = grow(g, colours, u, max_len);
        explored.add(layers.iter().map(|l| l.len() as u64).sum());
        pairs.iter().find_map(|&(a, b)| pair_up(g, colours, u, &layers, a, b))
    })
}

fn grow(g: &Digraph, colours: &[usize], u: Vertex, max_len: usize) -> Vec<Layer> {
    let mut layers: Vec<Layer> = Vec::with_capacity(max_len + 1);
    let mut first = Layer::new();
    first.insert((u, 1 << colours[u]), (usize::MAX, usize::MAX));
    layers.push(first);
    for len in 1..=max_len {
        let mut next = Layer::new();
        for &(w, mask) in layers[len - 1].keys() {
            for &arc in g.out_arcs(w) {
                let x = g.head(arc);
                let bit = 1u64 << colours[x];
                if x == u || mask & bit != 0 {
                    continue;
                }
                next.entry((x, mask | bit)).or_insert((w, arc));
            }
        }
        if next.is_empty() {
            break;
        }
        layers.push(next);
    }
    layers
}

fn pair_up(g: &Digraph, colours: &[usize], u: Vertex, layers: &[Layer], a: usize, b: usize) -> Option<SpindleWitness> {
    if a == 1 && b == 1 {
        // colour sets cannot tell parallel arcs apart
        return (0..g.vertex_count()).find_map(|v| {
            let mut arcs = g.arcs_between(u, v);
            let (x, y) = (arcs.next()?, arcs.next()?);
            Some(SpindleWitness {
                tail: u,
                head: v,
                paths: vec![DiPath::from_arcs(g, u, vec![x]), DiPath::from_arcs(g, u, vec![y])],
            })
        });
    }
    let (la, lb) = (layers.get(a)?, layers.get(b)?);
    let mut by_end: BTreeMap<Vertex, Vec<u64>> = BTreeMap::new();
    for &(v, m) in lb.keys() {
        by_end.entry(v).or_default().push(m);
    }
    let cu = 1u64 << colours[u];
    for &(v, ma) in la.keys() {
        let Some(masks) = by_end.get(&v) else {
            continue;
        };
        let ends = cu | 1u64 << colours[v];
        if let Some(&mb) = masks.iter().find(|&&mb| ma & mb == ends) {
            let first = trace(g, colours, u, layers, a, v, ma);
            let second = trace(g, colours, u, layers, b, v, mb);
            return Some(SpindleWitness { tail: u, head: v, paths: vec![first, second] });
        }
    }
    None
}

fn trace(g: &Digraph, colours: &[usize], u: Vertex, layers: &[Layer], len: usize, v: Vertex, mask: u64) -> DiPath {
    let mut arcs = Vec::with_capacity(len);
    let (mut cur, mut m) = (v, mask);
    for l in (1..=len).rev() {
        let &(prev, arc) = layers[l].get(&(cur, m)).expect("state recorded");
        arcs.push(arc);
        m &= !(1u64 << colours[cur]);
        cur = prev;
    }
    arcs.reverse();
    DiPath::from_arcs(g, u, arcs)
}
