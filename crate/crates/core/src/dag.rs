//! Spindle subdivisions in acyclic digraphs by dynamic programming over a
//! topological order.
//!
//! Every vertex `u` is split into `u+ -> u-`, so internally disjoint paths
//! become arc-disjoint ones. A table entry for start `x` lists up to `k` end
//! arcs with the number of arcs still owed on each path; an entry is resolved
//! by stepping back along the arc whose head comes last in the order.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::counter::Counter;
use crate::digraph::{check_witness, topological_order, ArcId, DiPath, Digraph, SpindleSpec, SpindleWitness, Vertex};
use crate::error::{invalid, Result};

/// Where an arc of the split digraph comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitArc {
    /// `(u+, u-)` for the original vertex `u`.
    Vertex(Vertex),
    /// `(a-, b+)` for the original arc `(a, b)`.
    Arc(ArcId),
}

#[derive(Clone, Debug)]
pub struct SplitDigraph {
    pub h: Digraph,
    /// Per arc of `h`, the element of the source digraph it stands for.
    pub origin: Vec<SplitArc>,
}

impl SplitDigraph {
    #[inline]
    pub fn plus_of(&self, u: Vertex) -> Vertex {
        2 * u
    }

    #[inline]
    pub fn minus_of(&self, u: Vertex) -> Vertex {
        2 * u + 1
    }

    /// The source vertex of `z` and whether `z` is its `+` copy.
    #[inline]
    pub fn vertex_origin(&self, z: Vertex) -> (Vertex, bool) {
        (z / 2, z.is_multiple_of(2))
    }

    /// Contracts an `h`-path running from some `u-` to some `v+`.
    pub fn contract(&self, g: &Digraph, path: &DiPath) -> Option<DiPath> {
        let (start, plus) = self.vertex_origin(path.first());
        if plus {
            return None;
        }
        let arcs: Vec<ArcId> = path
            .arcs
            .iter()
            .filter_map(|&a| match self.origin[a] {
                SplitArc::Arc(b) => Some(b),
                SplitArc::Vertex(_) => None,
            })
            .collect();
        Some(DiPath::from_arcs(g, start, arcs))
    }
}

/// Arcs `0..n` are the vertex arcs `(u+, u-)`; arc `n + i` is `(a-, b+)` for
/// the original arc `i = (a, b)`.
pub fn split_transform(g: &Digraph) -> SplitDigraph {
    let n = g.vertex_count();
    let mut arcs: Vec<(Vertex, Vertex)> = (0..n).map(|u| (2 * u, 2 * u + 1)).collect();
    let mut origin: Vec<SplitArc> = (0..n).map(SplitArc::Vertex).collect();
    for (i, &(a, b)) in g.arcs().iter().enumerate() {
        arcs.push((2 * a + 1, 2 * b));
        origin.push(SplitArc::Arc(i));
    }
    let h = Digraph::new(2 * n, arcs).expect("endpoints in range");
    SplitDigraph { h, origin }
}

/// An end arc (`None` for the empty path at the start) and the length still owed.
pub type Slot = (Option<ArcId>, usize);

#[derive(Clone, Debug)]
enum Verdict {
    False,
    Base,
    /// `from` was replaced by `to` to reach `child`.
    Step {
        child: Vec<Slot>,
        from: ArcId,
        to: Option<ArcId>,
    },
}

impl Verdict {
    fn holds(&self) -> bool {
        !matches!(self, Verdict::False)
    }
}

/// Memoised entries for one start vertex of a split digraph.
pub struct DpTable<'a> {
    h: &'a Digraph,
    pos: &'a [usize],
    x: Vertex,
    memo: HashMap<Vec<Slot>, Verdict>,
}

impl<'a> DpTable<'a> {
    /// `pos[z]` is the position of `z` in a topological order of `h`.
    pub fn new(h: &'a Digraph, pos: &'a [usize], x: Vertex) -> Self {
        Self { h, pos, x, memo: HashMap::new() }
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    pub fn canonical(&self, mut slots: Vec<Slot>) -> Vec<Slot> {
        slots.sort_unstable_by_key(|&(a, t)| match a {
            None => (0, 0, 0, t),
            Some(a) => (1, self.pos[self.h.head(a)], a, t),
        });
        slots
    }

    /// True iff arc-disjoint paths from `x` end at the listed arcs with at
    /// least the listed lengths.
    pub fn entry(&mut self, slots: Vec<Slot>) -> bool {
        let key = self.canonical(slots);
        self.eval(key)
    }

    fn eval(&mut self, key: Vec<Slot>) -> bool {
        if let Some(v) = self.memo.get(&key) {
            return v.holds();
        }
        let verdict = self.resolve(&key);
        let holds = verdict.holds();
        self.memo.insert(key, verdict);
        holds
    }

    fn resolve(&mut self, key: &[Slot]) -> Verdict {
        if key.iter().any(|&(a, t)| a.is_none() && t > 0) {
            return Verdict::False;
        }
        // canonical order puts the greatest head last
        let Some(&(Some(last), _)) = key.last() else {
            return Verdict::Base;
        };
        let h = self.h;
        let w = h.head(last);
        let i = key
            .iter()
            .enumerate()
            .filter(|&(_, &(a, _))| a.is_some_and(|a| h.head(a) == w))
            .max_by_key(|&(_, &(a, _))| self.pos[h.tail(a.unwrap())])
            .map(|(i, _)| i)
            .expect("an arc into w");
        let (ei, ti) = key[i];
        let ei = ei.unwrap();
        let w_prime = h.tail(ei);
        let owed = ti.saturating_sub(1);

        let candidates: Vec<Option<ArcId>> = if w_prime == self.x {
            vec![None]
        } else if self.pos[w_prime] < self.pos[self.x] {
            Vec::new()
        } else {
            h.in_arcs(w_prime).iter().copied().filter(|&e| key.iter().all(|&(a, _)| a != Some(e))).map(Some).collect()
        };
        for to in candidates {
            let mut child = key.to_vec();
            child[i] = (to, owed);
            let child = self.canonical(child);
            if self.eval(child.clone()) {
                return Verdict::Step { child, from: ei, to };
            }
        }
        Verdict::False
    }

    /// The paths certifying a true entry, in the order of `slots`.
    pub fn paths(&mut self, slots: &[Slot]) -> Option<Vec<DiPath>> {
        let key = self.canonical(slots.to_vec());
        if !self.eval(key.clone()) {
            return None;
        }
        // arcs collected backwards, one list per slot
        let mut rev: Vec<Vec<ArcId>> = slots.iter().map(|&(a, _)| a.into_iter().collect()).collect();
        let mut cur = key;
        loop {
            match self.memo.get(&cur).expect("evaluated") {
                Verdict::Base => break,
                Verdict::False => unreachable!("true entries lead to true entries"),
                Verdict::Step { child, from, to } => {
                    if let Some(to) = to {
                        let p = rev.iter_mut().find(|p| p.last() == Some(from)).expect("tracked arc");
                        p.push(*to);
                    }
                    cur = child.clone();
                }
            }
        }
        Some(
            rev.into_iter()
                .map(|mut arcs| {
                    arcs.reverse();
                    DiPath::from_arcs(self.h, self.x, arcs)
                })
                .collect(),
        )
    }
}

/// A subdivision of the `(k x ell)`-spindle in the acyclic digraph `g`.
pub fn dag_spindle(g: &Digraph, k: usize, ell: usize) -> Result<Option<SpindleWitness>> {
    dag_spindle_counted(g, k, ell, &Counter::new())
}

pub fn dag_spindle_counted(g: &Digraph, k: usize, ell: usize, explored: &Counter) -> Result<Option<SpindleWitness>> {
    if k == 0 || ell == 0 {
        return Err(invalid(format!("need k >= 1 and ell >= 1, got k = {k}, ell = {ell}")));
    }
    if topological_order(g).is_none() {
        return Err(invalid("digraph has a directed cycle"));
    }
    let spec = SpindleSpec::subdivision(vec![ell; k])?;
    let split = split_transform(g);
    let h = &split.h;
    let order = topological_order(h).expect("split of an acyclic digraph");
    let mut pos = vec![0; h.vertex_count()];
    for (i, &z) in order.iter().enumerate() {
        pos[z] = i;
    }
    let n = g.vertex_count();
    let owed = 2 * ell - 1;

    let found = (0..n).into_par_iter().find_map_first(|u| {
        if g.out_degree(u) < k {
            return None;
        }
        let x = split.minus_of(u);
        let mut table = DpTable::new(h, &pos, x);
        let mut heads: Vec<Vertex> = (0..n).filter(|&v| v != u && g.in_degree(v) >= k).collect();
        heads.sort_by_key(|&v| pos[split.plus_of(v)]);
        let mut result = None;
        'heads: for v in heads {
            let y = split.plus_of(v);
            if pos[y] < pos[x] {
                continue;
            }
            for combo in combinations(h.in_arcs(y), k) {
                let slots: Vec<Slot> = combo.iter().map(|&a| (Some(a), owed)).collect();
                if !table.entry(slots.clone()) {
                    continue;
                }
                let hpaths = table.paths(&slots).expect("true entry");
                let paths: Vec<DiPath> =
                    hpaths.iter().map(|p| split.contract(g, p).expect("starts at a minus copy")).collect();
                let w = SpindleWitness { tail: u, head: v, paths };
                // arc-disjointness in h already forces internal disjointness
                if check_witness(g, &spec, &w).is_ok() {
                    result = Some(w);
                    break 'heads;
                }
            }
        }
        explored.add(table.len() as u64);
        result
    });
    Ok(found)
}

fn combinations(items: &[ArcId], k: usize) -> Vec<Vec<ArcId>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(items: &[ArcId], k: usize, from: usize, cur: &mut Vec<ArcId>, out: &mut Vec<Vec<ArcId>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in from..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}
