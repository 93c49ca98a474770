//! 2-spindle subdivisions with two prescribed lower bounds `l1 <= l2`.
//!
//! Spindles whose paths both have at most `2 * l2` vertices are searched for
//! directly with colour-coding. Otherwise the long path starts with a path on
//! `l2` vertices drawn from a trimmed family, the short path's first `l1`
//! vertices are guessed, and a flow joins both to a common head.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::colorcoding::{default_trials, search_colouring, MAX_COLOURS};
use super::families::compute_path_families;
use crate::counter::Counter;
use crate::digraph::{check_witness, DiPath, Digraph, SpindleSpec, SpindleWitness, Vertex};
use crate::disjoint::route;
use crate::error::{invalid, Result};

/// Up to this many vertices the short phase colours every vertex differently,
/// which makes it an exhaustive search.
pub const EXHAUSTIVE_SHORT_PHASE: usize = 16;

#[derive(Clone, Debug, Default)]
pub struct FixedOptions {
    /// Seed for the colourings of the short phase.
    pub seed: u64,
    /// Colourings per length pair; `None` uses [`default_trials`].
    pub trials: Option<usize>,
}

pub fn solve_fixed_lengths(g: &Digraph, l1: usize, l2: usize) -> Result<Option<SpindleWitness>> {
    solve_fixed_lengths_with(g, l1, l2, &FixedOptions::default(), &Counter::new())
}

pub fn solve_fixed_lengths_with(
    g: &Digraph,
    l1: usize,
    l2: usize,
    opts: &FixedOptions,
    explored: &Counter,
) -> Result<Option<SpindleWitness>> {
    if l1 < 1 || l1 > l2 {
        return Err(invalid(format!("need 1 <= l1 <= l2, got ({l1}, {l2})")));
    }
    let spec = SpindleSpec::subdivision(vec![l1, l2])?;
    let n = g.vertex_count();

    if l2 == 1 {
        let pairs: Vec<(Vertex, Vertex)> =
            (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
        return Ok(pairs.par_iter().find_map_first(|&(u, v)| {
            explored.bump();
            let paths = route(g, &[u], true, v, &[], |_| true, 2);
            (paths.len() == 2).then_some(SpindleWitness { tail: u, head: v, paths })
        }));
    }

    if let Some(w) = short_phase(g, l1, l2, opts, explored) {
        debug_assert!(check_witness(g, &spec, &w).is_ok());
        return Ok(Some(w));
    }
    Ok(long_phase(g, l1, l2, &spec, explored))
}

/// Exact spindles with lengths `a` in `[l1, 2 l2]`, `b` in `[l2, 2 l2]`;
/// pairs with `a > b` repeat a pair already in range.
fn short_phase(g: &Digraph, l1: usize, l2: usize, opts: &FixedOptions, explored: &Counter) -> Option<SpindleWitness> {
    let n = g.vertex_count();
    let mut pairs = Vec::new();
    for b in l2..=2 * l2 {
        for a in l1..=b {
            if a + b <= n {
                pairs.push((a, b));
            }
        }
    }
    if pairs.is_empty() {
        return None;
    }
    if n <= EXHAUSTIVE_SHORT_PHASE {
        let colours: Vec<usize> = (0..n).collect();
        return search_colouring(g, &colours, &pairs, explored);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for &(a, b) in &pairs {
        let c = a + b;
        if c > MAX_COLOURS {
            continue;
        }
        let trials = opts.trials.unwrap_or_else(|| default_trials(c));
        for _ in 0..trials {
            explored.bump();
            let colours: Vec<usize> = (0..n).map(|_| rng.gen_range(0..c)).collect();
            if let Some(w) = search_colouring(g, &colours, &[(a, b)], explored) {
                return Some(w);
            }
        }
    }
    None
}

fn long_phase(g: &Digraph, l1: usize, l2: usize, spec: &SpindleSpec, explored: &Counter) -> Option<SpindleWitness> {
    let n = g.vertex_count();
    let q = l1 + l2 - 1;
    (0..n).into_par_iter().find_map_first(|u| {
        if g.out_degree(u) < 2 {
            return None;
        }
        let families = compute_path_families(g, u, l2, q).expect("valid start");
        for (&u_end, family) in &families {
            for entry in &family.entries {
                let long = &entry.path;
                let mut avoid = vec![false; n];
                for &x in &long.vertices[1..] {
                    avoid[x] = true;
                }
                for prefix in prefixes(g, u, l1, &avoid) {
                    explored.bump();
                    if let Some(w) = join(g, long, u_end, &prefix, spec) {
                        return Some(w);
                    }
                }
            }
        }
        None
    })
}

/// Paths from `u` on `count` vertices avoiding `avoid`.
fn prefixes(g: &Digraph, u: Vertex, count: usize, avoid: &[bool]) -> Vec<DiPath> {
    let mut out = Vec::new();
    let mut stack = vec![DiPath::trivial(u)];
    while let Some(p) = stack.pop() {
        if p.vertices.len() == count {
            out.push(p);
            continue;
        }
        for &a in g.out_arcs(p.last()).iter().rev() {
            let h = g.head(a);
            if avoid[h] || p.vertices.contains(&h) {
                continue;
            }
            let mut next = p.clone();
            next.vertices.push(h);
            next.arcs.push(a);
            stack.push(next);
        }
    }
    out
}

/// Routes the prefix end and the long path's end disjointly to some head.
fn join(g: &Digraph, long: &DiPath, u_end: Vertex, prefix: &DiPath, spec: &SpindleSpec) -> Option<SpindleWitness> {
    let n = g.vertex_count();
    let p_end = prefix.last();
    let mut blocked = vec![false; n];
    for &x in &long.vertices {
        blocked[x] = x != u_end;
    }
    for &x in prefix.internal() {
        blocked[x] = true;
    }
    if prefix.is_empty() {
        // the tail itself starts the short path
        blocked[p_end] = false;
    }
    for v in 0..n {
        if blocked[v] || v == p_end || v == u_end {
            continue;
        }
        let tails = route(g, &[p_end, u_end], false, v, &blocked, |_| true, 2);
        if tails.len() < 2 {
            continue;
        }
        let (t1, t2) = if tails[0].first() == p_end { (&tails[0], &tails[1]) } else { (&tails[1], &tails[0]) };
        let w = SpindleWitness {
            tail: prefix.first(),
            head: v,
            paths: vec![prefix.clone().concat(t1), long.clone().concat(t2)],
        };
        if check_witness(g, spec, &w).is_ok() {
            return Some(w);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::validate_witness;

    fn spindle432() -> Digraph {
        Digraph::new(8, vec![(0, 2), (2, 3), (3, 4), (4, 1), (0, 5), (5, 6), (6, 1), (0, 7), (7, 1)]).unwrap()
    }

    fn accepts(g: &Digraph, l1: usize, l2: usize) -> bool {
        match solve_fixed_lengths(g, l1, l2).unwrap() {
            Some(w) => {
                assert!(validate_witness(g, &SpindleSpec::subdivision(vec![l1, l2]).unwrap(), &w));
                true
            }
            None => false,
        }
    }

    #[test]
    fn spindle432_pairs() {
        let g = spindle432();
        assert!(accepts(&g, 2, 4));
        assert!(accepts(&g, 3, 4));
        assert!(accepts(&g, 3, 3));
        assert!(!accepts(&g, 4, 4));
        assert!(!accepts(&g, 3, 5));
    }

    #[test]
    fn single_path_has_no_spindle() {
        let g = Digraph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert!(!accepts(&g, 1, 1));
        assert!(!accepts(&g, 1, 3));
    }

    #[test]
    fn argument_checks() {
        assert!(solve_fixed_lengths(&spindle432(), 3, 2).is_err());
        assert!(solve_fixed_lengths(&spindle432(), 0, 2).is_err());
    }

    #[test]
    fn long_phase_alone_finds_long_spindles() {
        // paths of length 2 and 7 from 0 to 1; short phase for (1, 2) stops at 4 vertices per path
        let mut arcs = vec![(0, 2), (2, 1)];
        let chain = [0, 3, 4, 5, 6, 7, 8, 1];
        arcs.extend(chain.windows(2).map(|w| (w[0], w[1])));
        let g = Digraph::new(9, arcs).unwrap();
        let spec = SpindleSpec::subdivision(vec![1, 2]).unwrap();
        let w = long_phase(&g, 1, 2, &spec, &Counter::new()).expect("long spindle");
        assert!(validate_witness(&g, &spec, &w));
        let spec = SpindleSpec::subdivision(vec![2, 2]).unwrap();
        assert!(long_phase(&g, 2, 2, &spec, &Counter::new()).is_some());
    }
}
