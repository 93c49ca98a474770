//! 2-spindles of large total length.
//!
//! A spindle with `L1 + L2 >= l` exists iff, for some split `l1 + l2 = l`,
//! there are paths from a tail `u` on `l1` and `l2` vertices (meeting only in
//! `u`) that continue disjointly from their ends `u1`, `u2` to a common head.
//! The starting pairs are drawn from trimmed families; the continuations come
//! from a two-source flow.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::families::{compute_path_families, merge_families, MergedEntry, PathFamily};
use crate::counter::Counter;
use crate::digraph::{check_structure, Digraph, SpindleWitness, Vertex};
use crate::disjoint::route;
use crate::error::{invalid, Result};
use crate::repsets::TrimContext;

/// A 2-spindle whose path lengths sum to at least `ell`, if one exists.
pub fn solve_total_length(g: &Digraph, ell: usize) -> Result<Option<SpindleWitness>> {
    solve_total_length_counted(g, ell, &Counter::new())
}

pub fn solve_total_length_counted(g: &Digraph, ell: usize, explored: &Counter) -> Result<Option<SpindleWitness>> {
    if ell < 2 {
        return Err(invalid(format!("total length {ell} is below 2")));
    }
    let n = g.vertex_count();
    if ell == 2 {
        // every 2-spindle qualifies, including a doubled arc
        let pairs: Vec<(Vertex, Vertex)> =
            (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
        return Ok(pairs.par_iter().find_map_first(|&(u, v)| {
            explored.bump();
            let paths = route(g, &[u], true, v, &[], |_| true, 2);
            (paths.len() == 2).then_some(SpindleWitness { tail: u, head: v, paths })
        }));
    }

    // the merged sets must represent against continuations of up to ell - 1 vertices
    let q = ell - 1;
    let merge_ctx = TrimContext::new(n, 2 * ell - 2);
    let found = (0..n).into_par_iter().find_map_first(|u| {
        if g.out_degree(u) == 0 {
            return None;
        }
        let mut cache: BTreeMap<usize, BTreeMap<Vertex, PathFamily>> = BTreeMap::new();
        for l1 in 1..=ell / 2 {
            let l2 = ell - l1;
            for la in [l1, l2] {
                cache
                    .entry(la)
                    .or_insert_with(|| compute_path_families(g, u, la, 2 * ell - 2 - la).expect("valid start"));
            }
            let (fa, fb) = (&cache[&l1], &cache[&l2]);
            for (&u1, f1) in fa {
                for (&u2, f2) in fb {
                    if u1 == u2 {
                        continue;
                    }
                    let merged = merge_families(f1, f2, q, &merge_ctx).expect("consistent ranks");
                    for entry in &merged.entries {
                        explored.bump();
                        if let Some(w) = close_up(g, u, u1, u2, entry, ell) {
                            return Some(w);
                        }
                    }
                }
            }
        }
        None
    });
    Ok(found)
}

/// Tries every head `v` outside the entry's set for disjoint continuations.
fn close_up(g: &Digraph, u: Vertex, u1: Vertex, u2: Vertex, entry: &MergedEntry, ell: usize) -> Option<SpindleWitness> {
    let n = g.vertex_count();
    let mut blocked = vec![false; n];
    for &x in &entry.set {
        blocked[x] = x != u1 && x != u2;
    }
    for v in 0..n {
        if entry.set.binary_search(&v).is_ok() {
            continue;
        }
        let tails = route(g, &[u1, u2], false, v, &blocked, |_| true, 2);
        if tails.len() < 2 {
            continue;
        }
        let (t1, t2) = if tails[0].first() == u1 { (&tails[0], &tails[1]) } else { (&tails[1], &tails[0]) };
        let w = SpindleWitness {
            tail: u,
            head: v,
            paths: vec![entry.first.clone().concat(t1), entry.second.clone().concat(t2)],
        };
        if check_structure(g, &w).is_ok() && w.total_length() >= ell {
            return Some(w);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spindle432() -> Digraph {
        Digraph::new(8, vec![(0, 2), (2, 3), (3, 4), (4, 1), (0, 5), (5, 6), (6, 1), (0, 7), (7, 1)]).unwrap()
    }

    #[test]
    fn spindle432_totals() {
        let g = spindle432();
        let w = solve_total_length(&g, 7).unwrap().expect("lengths 4 and 3");
        assert!(check_structure(&g, &w).is_ok());
        let mut l = w.lengths();
        l.sort_unstable();
        assert_eq!(l, vec![3, 4]);
        assert!(solve_total_length(&g, 8).unwrap().is_none());
        for ell in 2..=7 {
            assert!(solve_total_length(&g, ell).unwrap().is_some(), "ell = {ell}");
        }
    }

    #[test]
    fn doubled_arc() {
        let g = Digraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let w = solve_total_length(&g, 2).unwrap().unwrap();
        assert_eq!(w.lengths(), vec![1, 1]);
        assert!(solve_total_length(&g, 3).unwrap().is_none());
    }

    #[test]
    fn rejects_short_targets() {
        assert!(solve_total_length(&spindle432(), 1).is_err());
    }
}
