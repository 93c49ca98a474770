//! Engines for systems of disjoint paths.
//!
//! [`max_internally_disjoint_paths`] runs a unit-capacity flow on the
//! vertex-split network; [`max_nontrivial_xy_paths`] reduces the set-to-set
//! problem to a maximum matching in a general graph.

mod flow;
mod gadget;
mod matching;

pub(crate) use flow::route;
pub(crate) use gadget::nontrivial_paths_filtered;
pub use gadget::{build_split_graph, max_nontrivial_xy_paths, Origin, SplitGadget};
pub use matching::{max_matching, Matching, UndirectedGraph};

use crate::digraph::{DiPath, Digraph, Vertex};
use crate::error::{invalid, Result};

/// Maximum number of `(s, t)`-paths in `g - forbidden` pairwise sharing only
/// `s` and `t`, together with one such system. Parallel `s -> t` arcs count
/// separately.
pub fn max_internally_disjoint_paths(
    g: &Digraph,
    s: Vertex,
    t: Vertex,
    forbidden: &[Vertex],
) -> Result<(usize, Vec<DiPath>)> {
    let n = g.vertex_count();
    if s >= n || t >= n {
        return Err(invalid(format!("endpoint out of range 0..{n}")));
    }
    if s == t {
        return Err(invalid("source and target coincide"));
    }
    let mut blocked = vec![false; n];
    for &v in forbidden {
        if v >= n {
            return Err(invalid(format!("forbidden vertex {v} out of range")));
        }
        if v == s || v == t {
            return Err(invalid("an endpoint is forbidden"));
        }
        blocked[v] = true;
    }
    let paths = route(g, &[s], true, t, &blocked, |_| true, usize::MAX);
    Ok((paths.len(), paths))
}
