//! Trimmed families of paths leaving a fixed vertex, and their pairwise merge.

use std::collections::{BTreeMap, HashSet};

use crate::digraph::{DiPath, Digraph, Vertex};
use crate::error::{invalid, Result};
use crate::repsets::{trim_indices, TrimContext};

/// A vertex set together with a path spanning exactly that set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathEntry {
    pub set: Vec<Vertex>,
    pub path: DiPath,
}

/// Paths on `p` vertices from `u` to `u_end`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathFamily {
    pub u: Vertex,
    pub u_end: Vertex,
    pub p: usize,
    pub entries: Vec<PathEntry>,
}

/// A pair of paths from `u`, to `u1` on `l1` vertices and to `u2` on `l2`
/// vertices, meeting only in `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergedEntry {
    pub set: Vec<Vertex>,
    pub first: DiPath,
    pub second: DiPath,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergedFamily {
    pub u: Vertex,
    pub u1: Vertex,
    pub u2: Vertex,
    pub l1: usize,
    pub l2: usize,
    pub entries: Vec<MergedEntry>,
}

fn dedup_by_set<T>(items: Vec<T>, set: impl Fn(&T) -> &Vec<Vertex>) -> Vec<T> {
    let mut seen = HashSet::new();
    items.into_iter().filter(|it| seen.insert(set(it).clone())).collect()
}

/// For every end vertex `u'`, a family q-representing the vertex sets of
/// `(u, u')`-paths on `ell` vertices, in the uniform matroid of rank `ell + q`.
///
/// Level `j` is trimmed as a `(q + ell - j)`-representative family so that
/// extending by one vertex keeps the guarantee for the final level.
pub fn compute_path_families(g: &Digraph, u: Vertex, ell: usize, q: usize) -> Result<BTreeMap<Vertex, PathFamily>> {
    if ell == 0 {
        return Err(invalid("paths need at least one vertex"));
    }
    if u >= g.vertex_count() {
        return Err(invalid(format!("vertex {u} out of range")));
    }
    let ctx = TrimContext::new(g.vertex_count(), ell + q);
    let mut level: BTreeMap<Vertex, Vec<PathEntry>> = BTreeMap::new();
    level.insert(u, vec![PathEntry { set: vec![u], path: DiPath::trivial(u) }]);

    for j in 1..ell {
        let mut next: BTreeMap<Vertex, Vec<PathEntry>> = BTreeMap::new();
        for (&w, entries) in &level {
            for e in entries {
                for &a in g.out_arcs(w) {
                    let x = g.head(a);
                    let Err(pos) = e.set.binary_search(&x) else {
                        continue;
                    };
                    let mut set = e.set.clone();
                    set.insert(pos, x);
                    let mut path = e.path.clone();
                    path.vertices.push(x);
                    path.arcs.push(a);
                    next.entry(x).or_default().push(PathEntry { set, path });
                }
            }
        }
        let q_next = q + ell - (j + 1);
        for entries in next.values_mut() {
            let unique = dedup_by_set(std::mem::take(entries), |e| &e.set);
            let sets: Vec<Vec<Vertex>> = unique.iter().map(|e| e.set.clone()).collect();
            let keep = trim_indices(&sets, j + 1, q_next, &ctx);
            let mut unique: Vec<Option<PathEntry>> = unique.into_iter().map(Some).collect();
            *entries = keep.into_iter().map(|i| unique[i].take().unwrap()).collect();
        }
        level = next;
    }

    Ok(level.into_iter().map(|(end, entries)| (end, PathFamily { u, u_end: end, p: ell, entries })).collect())
}

/// Pairs of entries meeting only in the common start, trimmed to a
/// q-representative family of the merged sets.
pub fn merge_families(f1: &PathFamily, f2: &PathFamily, q: usize, ctx: &TrimContext) -> Result<MergedFamily> {
    if f1.u != f2.u {
        return Err(invalid(format!("families start at {} and {}", f1.u, f2.u)));
    }
    let p = f1.p + f2.p - 1;
    if ctx.rank() != p + q {
        return Err(invalid(format!("context rank {} differs from p + q = {}", ctx.rank(), p + q)));
    }
    let u = f1.u;
    let mut entries = Vec::new();
    for a in &f1.entries {
        for b in &f2.entries {
            if let Some(set) = union_meeting_at(&a.set, &b.set, u) {
                entries.push(MergedEntry { set, first: a.path.clone(), second: b.path.clone() });
            }
        }
    }
    let entries = dedup_by_set(entries, |e| &e.set);
    let sets: Vec<Vec<Vertex>> = entries.iter().map(|e| e.set.clone()).collect();
    let keep = trim_indices(&sets, p, q, ctx);
    let mut entries: Vec<Option<MergedEntry>> = entries.into_iter().map(Some).collect();
    Ok(MergedFamily {
        u,
        u1: f1.u_end,
        u2: f2.u_end,
        l1: f1.p,
        l2: f2.p,
        entries: keep.into_iter().map(|i| entries[i].take().unwrap()).collect(),
    })
}

/// Sorted union of two sorted sets whose intersection is exactly `{u}`.
fn union_meeting_at(a: &[Vertex], b: &[Vertex], u: Vertex) -> Option<Vec<Vertex>> {
    let mut out = Vec::with_capacity(a.len() + b.len() - 1);
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                if a[i] != u {
                    return None;
                }
                out.push(u);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    (out.len() == a.len() + b.len() - 1).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repsets::{binomial, check_representative, SetFamily};
    use proptest::prelude::*;

    fn path4() -> Digraph {
        Digraph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn base_level_is_the_start() {
        let fams = compute_path_families(&path4(), 1, 1, 3).unwrap();
        assert_eq!(fams.len(), 1);
        assert_eq!(fams[&1].entries, vec![PathEntry { set: vec![1], path: DiPath::trivial(1) }]);
    }

    #[test]
    fn unique_path() {
        let fams = compute_path_families(&path4(), 0, 3, 1).unwrap();
        assert_eq!(fams.keys().copied().collect::<Vec<_>>(), vec![2]);
        assert_eq!(fams[&2].entries.len(), 1);
        assert_eq!(fams[&2].entries[0].set, vec![0, 1, 2]);
        assert_eq!(fams[&2].entries[0].path.vertices, vec![0, 1, 2]);
    }

    #[test]
    fn merge_with_degenerate_second_path() {
        let g = Digraph::new(5, vec![(0, 1), (1, 2), (0, 3), (3, 2)]).unwrap();
        let fams = compute_path_families(&g, 0, 3, 1).unwrap();
        let start = compute_path_families(&g, 0, 1, 1).unwrap();
        let ctx = TrimContext::new(5, 4);
        let m = merge_families(&fams[&2], &start[&0], 1, &ctx).unwrap();
        let sets: Vec<_> = m.entries.iter().map(|e| e.set.clone()).collect();
        let orig: Vec<_> = fams[&2].entries.iter().map(|e| e.set.clone()).collect();
        assert_eq!(sets, orig);
    }

    #[test]
    fn overlapping_pair_merges_to_nothing() {
        // both 3-vertex paths from 0 pass through 1
        let g = Digraph::new(4, vec![(0, 1), (1, 2), (1, 3)]).unwrap();
        let fams = compute_path_families(&g, 0, 3, 0).unwrap();
        let ctx = TrimContext::new(4, 5);
        let m = merge_families(&fams[&2], &fams[&3], 0, &ctx).unwrap();
        assert!(m.entries.is_empty());
        assert!(merge_families(&fams[&2], &compute_path_families(&g, 1, 2, 0).unwrap()[&2], 0, &ctx).is_err());
    }

    fn all_paths_from(g: &Digraph, u: Vertex, verts: usize) -> Vec<DiPath> {
        let mut out = Vec::new();
        let mut stack = vec![DiPath::trivial(u)];
        while let Some(p) = stack.pop() {
            if p.vertices.len() == verts {
                out.push(p);
                continue;
            }
            for &a in g.out_arcs(p.last()) {
                let h = g.head(a);
                if !p.vertices.contains(&h) {
                    let mut q = p.clone();
                    q.vertices.push(h);
                    q.arcs.push(a);
                    stack.push(q);
                }
            }
        }
        out
    }

    fn arb_digraph() -> impl Strategy<Value = Digraph> {
        (4usize..=12).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..n * 4)
                .prop_map(move |pairs| Digraph::new(n, pairs.into_iter().filter(|(a, b)| a != b).collect()).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn buckets_represent_all_paths(g in arb_digraph(), ell in 1usize..=4, q in 0usize..=3, u in 0usize..4) {
            let n = g.vertex_count();
            let fams = compute_path_families(&g, u, ell, q).unwrap();
            let paths = all_paths_from(&g, u, ell);
            for end in 0..n {
                let full: Vec<Vec<Vertex>> = paths.iter().filter(|p| p.last() == end).map(|p| {
                    let mut s = p.vertices.clone();
                    s.sort_unstable();
                    s
                }).collect();
                let got = fams.get(&end);
                prop_assert_eq!(full.is_empty(), got.is_none());
                if let Some(f) = got {
                    for e in &f.entries {
                        prop_assert!(e.path.is_valid_in(&g));
                        prop_assert_eq!((e.path.first(), e.path.last(), e.path.vertices.len()), (u, end, ell));
                        let mut s = e.path.vertices.clone();
                        s.sort_unstable();
                        prop_assert_eq!(&s, &e.set);
                    }
                    if n >= ell + q {
                        prop_assert!(f.entries.len() <= binomial(ell + q, ell));
                    }
                    let whole = SetFamily::new(n, ell, full).unwrap();
                    let sub = SetFamily::new(n, ell, f.entries.iter().map(|e| e.set.clone()).collect()).unwrap();
                    prop_assert!(check_representative(&whole, &sub, q).unwrap());
                }
            }
        }

        #[test]
        fn merged_families_represent_path_pairs(g in arb_digraph(), l1 in 1usize..=3, l2 in 2usize..=3, q in 0usize..=2) {
            let n = g.vertex_count();
            let u = 0;
            let qa = q + l2 - 1;
            let qb = q + l1 - 1;
            let fa = compute_path_families(&g, u, l1, qa).unwrap();
            let fb = compute_path_families(&g, u, l2, qb).unwrap();
            let ctx = TrimContext::new(n, l1 + l2 - 1 + q);
            let pa = all_paths_from(&g, u, l1);
            let pb = all_paths_from(&g, u, l2);
            for (&u1, f1) in &fa {
                for (&u2, f2) in &fb {
                    let merged = merge_families(f1, f2, q, &ctx).unwrap();
                    let mut full = Vec::new();
                    for a in pa.iter().filter(|p| p.last() == u1) {
                        for b in pb.iter().filter(|p| p.last() == u2) {
                            let mut sa = a.vertices.clone();
                            sa.sort_unstable();
                            let mut sb = b.vertices.clone();
                            sb.sort_unstable();
                            if let Some(s) = union_meeting_at(&sa, &sb, u) {
                                full.push(s);
                            }
                        }
                    }
                    prop_assert_eq!(full.is_empty(), merged.entries.is_empty());
                    if full.is_empty() { continue; }
                    for e in &merged.entries {
                        prop_assert_eq!(e.first.internal().iter().filter(|x| e.second.vertices.contains(x)).count(), 0);
                    }
                    let p = l1 + l2 - 1;
                    let whole = SetFamily::new(n, p, full).unwrap();
                    let sub = SetFamily::new(n, p, merged.entries.iter().map(|e| e.set.clone()).collect()).unwrap();
                    prop_assert!(check_representative(&whole, &sub, q).unwrap());
                }
            }
        }
    }
}
