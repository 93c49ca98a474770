//! Largest `k` with a `(k x l)`-spindle subdivision, for `l <= 3`.
//!
//! For `l = 1` and `l = 2` this is a max-flow per endpoint pair (for `l = 2`
//! after removing the arcs joining the pair). For `l = 3` every path leaves the
//! tail `s` into `N+(s)`, travels a nontrivial path, and enters the head `t`
//! from `N-(t)`; the middle parts form disjoint nontrivial `X -> Y` paths in
//! `G - {s, t}`.

use rayon::prelude::*;

use crate::counter::Counter;
use crate::digraph::{DiPath, Digraph, SpindleWitness, Vertex};
use crate::disjoint::{nontrivial_paths_filtered, route};
use crate::error::{invalid, Result};

pub fn max_k_for_ell(g: &Digraph, ell: usize) -> Result<(usize, Option<SpindleWitness>)> {
    max_k_for_ell_counted(g, ell, &Counter::new())
}

/// As [`max_k_for_ell`], adding the number of endpoint pairs examined to `explored`.
pub fn max_k_for_ell_counted(g: &Digraph, ell: usize, explored: &Counter) -> Result<(usize, Option<SpindleWitness>)> {
    if !(1..=3).contains(&ell) {
        return Err(invalid(format!("length {ell} is not in 1..=3")));
    }
    let n = g.vertex_count();
    let pairs: Vec<(Vertex, Vertex)> =
        (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();

    let results: Vec<(usize, Vec<DiPath>)> = pairs
        .par_iter()
        .map(|&(u, v)| {
            if g.out_degree(u) == 0 || g.in_degree(v) == 0 {
                return (0, Vec::new());
            }
            explored.bump();
            let paths = match ell {
                1 => route(g, &[u], true, v, &[], |_| true, usize::MAX),
                2 => {
                    let joins = |a| {
                        let (x, y) = g.arc(a);
                        (x == u && y == v) || (x == v && y == u)
                    };
                    route(g, &[u], true, v, &[], |a| !joins(a), usize::MAX)
                }
                _ => through_neighbourhoods(g, u, v),
            };
            (paths.len(), paths)
        })
        .collect();

    // max count, lexicographically smallest pair among ties
    let mut best: Option<usize> = None;
    for (i, (k, _)) in results.iter().enumerate() {
        if *k > 0 && best.is_none_or(|b| *k > results[b].0) {
            best = Some(i);
        }
    }
    Ok(match best {
        None => (0, None),
        Some(i) => {
            let (tail, head) = pairs[i];
            let (k, paths) = results.into_iter().nth(i).unwrap();
            (k, Some(SpindleWitness { tail, head, paths }))
        }
    })
}

fn through_neighbourhoods(g: &Digraph, s: Vertex, t: Vertex) -> Vec<DiPath> {
    let xs: Vec<Vertex> = g.out_neighbors(s).into_iter().filter(|&x| x != t).collect();
    let ys: Vec<Vertex> = g.in_neighbors(t).into_iter().filter(|&y| y != s).collect();
    if xs.is_empty() || ys.is_empty() {
        return Vec::new();
    }
    let touches = |a| {
        let (x, y) = g.arc(a);
        x == s || x == t || y == s || y == t
    };
    let (_, middles) = nontrivial_paths_filtered(g, &xs, &ys, |a| !touches(a));
    middles
        .into_iter()
        .map(|mid| {
            let enter = g.arcs_between(s, mid.first()).next().expect("x is an out-neighbour of s");
            let leave = g.arcs_between(mid.last(), t).next().expect("y is an in-neighbour of t");
            DiPath::from_arcs(g, s, [enter].into_iter().chain(mid.arcs.iter().copied()).chain([leave]).collect())
        })
        .collect()
}
