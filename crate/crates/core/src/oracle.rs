//! Exhaustive search over spindles, for small digraphs.
//!
//! Everything here is exponential and guarded by a vertex-count limit. The
//! search shares no code with the flow and matching engines so that it can
//! serve as an independent reference for them.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::counter::Counter;
use crate::digraph::{check_witness, ArcId, DiPath, Digraph, Mode, SpindleSpec, SpindleWitness, Vertex};
use crate::error::{Error, Result};

pub const DEFAULT_GUARD: usize = 14;
/// Vertex sets are `u128` masks.
const HARD_CAP: usize = 128;
/// `max_total` and the packing search tabulate subsets of the non-endpoint vertices.
const SUBSET_CAP: usize = 24;

/// Exhaustive solver with a size guard and a work counter.
#[derive(Debug)]
pub struct Oracle {
    guard: usize,
    explored: Counter,
}

impl Default for Oracle {
    fn default() -> Self {
        Self::with_guard(DEFAULT_GUARD)
    }
}

impl Oracle {
    pub fn with_guard(guard: usize) -> Self {
        Self { guard, explored: Counter::new() }
    }

    pub fn guard(&self) -> usize {
        self.guard
    }

    /// Search nodes visited so far.
    pub fn explored(&self) -> u64 {
        self.explored.get()
    }

    fn admit(&self, g: &Digraph, cap: usize) -> Result<()> {
        let limit = self.guard.min(cap);
        if g.vertex_count() > limit {
            return Err(Error::GuardExceeded { size: g.vertex_count(), guard: limit });
        }
        Ok(())
    }

    /// A spindle with the given lengths (lower bounds in subdivision mode).
    pub fn find(&self, g: &Digraph, lengths: &[usize], mode: Mode) -> Result<Option<SpindleWitness>> {
        let spec = SpindleSpec::new(lengths.to_vec(), mode)?;
        self.admit(g, HARD_CAP)?;
        let prep = Prep::new(g);
        let mut demands = spec.lengths.clone();
        demands.sort_unstable_by(|a, b| b.cmp(a));

        let n = g.vertex_count();
        let mut pairs: Vec<(Vertex, Vertex)> =
            (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
        pairs.sort_by_key(|&(u, v)| (std::cmp::Reverse(g.out_degree(u) * g.in_degree(v)), u, v));

        let all = full_mask(n);
        let found = pairs
            .par_iter()
            .find_map_first(|&(u, v)| PairSearch::run(&prep, u, v, mode, &demands, all, &self.explored));
        if let Some(w) = &found {
            debug_assert!(check_witness(g, &spec, w).is_ok());
        }
        Ok(found)
    }

    /// Largest `k` admitting a `(k x ell)`-spindle subdivision.
    pub fn max_k(&self, g: &Digraph, ell: usize) -> Result<usize> {
        let mut k = 0;
        loop {
            let lengths = vec![ell; k + 1];
            if self.find(g, &lengths, Mode::Subdivision)?.is_none() {
                return Ok(k);
            }
            k += 1;
        }
    }

    /// Largest `L1 + L2` over all 2-spindles; 0 when there is none.
    pub fn max_total(&self, g: &Digraph) -> Result<usize> {
        self.admit(g, SUBSET_CAP)?;
        let n = g.vertex_count();
        let best = (0..n)
            .into_par_iter()
            .flat_map_iter(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .map(|(u, v)| {
                let table = RouteTable::new(g, u, v);
                self.explored.add(table.feasible.len() as u64);
                table.best_pair()
            })
            .max();
        Ok(best.unwrap_or(0))
    }

    /// Whether `count` pairwise vertex-disjoint `(2 x 1)`-spindle subdivisions exist.
    pub fn disjoint_pack(&self, g: &Digraph, count: usize) -> Result<bool> {
        Ok(self.disjoint_pack_witness(g, count)?.is_some())
    }

    /// As [`Oracle::disjoint_pack`], returning the spindles.
    pub fn disjoint_pack_witness(&self, g: &Digraph, count: usize) -> Result<Option<Vec<SpindleWitness>>> {
        self.admit(g, SUBSET_CAP)?;
        if count == 0 {
            return Ok(Some(Vec::new()));
        }
        let n = g.vertex_count();
        // inclusion-minimal vertex sets of 2-spindles, with one endpoint pair each
        let mut sets: HashMap<u128, (Vertex, Vertex)> = HashMap::new();
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                let table = RouteTable::new(g, u, v);
                for (mask, pair) in table.spindle_sets() {
                    sets.entry(mask).or_insert(pair);
                }
            }
        }
        let mut by_size: Vec<(u128, (Vertex, Vertex))> = sets.into_iter().collect();
        by_size.sort_by_key(|&(m, p)| (m.count_ones(), m, p));
        let mut minimal: Vec<(u128, (Vertex, Vertex))> = Vec::new();
        for (m, p) in by_size {
            if !minimal.iter().any(|&(k, _)| k & m == k) {
                minimal.push((m, p));
            }
        }

        let mut chosen = Vec::new();
        if !pack(&minimal, 0, 0, count, &mut chosen, &self.explored) {
            return Ok(None);
        }
        let prep = Prep::new(g);
        let witnesses = chosen
            .into_iter()
            .map(|i| {
                let (mask, (u, v)) = minimal[i];
                PairSearch::run(&prep, u, v, Mode::Subdivision, &[1, 1], mask, &self.explored)
                    .expect("recorded set carries a spindle")
            })
            .collect();
        Ok(Some(witnesses))
    }
}

pub fn oracle_find(g: &Digraph, lengths: &[usize], mode: Mode) -> Result<Option<SpindleWitness>> {
    Oracle::default().find(g, lengths, mode)
}

pub fn oracle_max_k(g: &Digraph, ell: usize) -> Result<usize> {
    Oracle::default().max_k(g, ell)
}

pub fn oracle_max_total(g: &Digraph) -> Result<usize> {
    Oracle::default().max_total(g)
}

pub fn oracle_disjoint_pack(g: &Digraph, count: usize) -> Result<bool> {
    Oracle::default().disjoint_pack(g, count)
}

fn full_mask(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

fn pack(
    sets: &[(u128, (Vertex, Vertex))],
    start: usize,
    used: u128,
    left: usize,
    chosen: &mut Vec<usize>,
    explored: &Counter,
) -> bool {
    if left == 0 {
        return true;
    }
    explored.bump();
    for i in start..sets.len() {
        if sets.len() - i < left {
            break;
        }
        if sets[i].0 & used != 0 {
            continue;
        }
        chosen.push(i);
        if pack(sets, i + 1, used | sets[i].0, left - 1, chosen, explored) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Neighbourhood masks and one representative arc per adjacent pair.
struct Prep<'a> {
    g: &'a Digraph,
    out_mask: Vec<u128>,
    in_mask: Vec<u128>,
    /// distinct out-neighbours with the smallest arc to each, by neighbour
    out_list: Vec<Vec<(Vertex, ArcId)>>,
}

impl<'a> Prep<'a> {
    fn new(g: &'a Digraph) -> Self {
        let n = g.vertex_count();
        let mut out_mask = vec![0u128; n];
        let mut in_mask = vec![0u128; n];
        let mut out_list = vec![Vec::new(); n];
        for w in 0..n {
            let mut firsts: Vec<(Vertex, ArcId)> = g.out_arcs(w).iter().map(|&a| (g.head(a), a)).collect();
            firsts.sort_unstable();
            firsts.dedup_by_key(|&mut (h, _)| h);
            for &(h, _) in &firsts {
                out_mask[w] |= 1 << h;
                in_mask[h] |= 1 << w;
            }
            out_list[w] = firsts;
        }
        Self { g, out_mask, in_mask, out_list }
    }

    fn closure(&self, seeds: u128, within: u128, step: &[u128]) -> u128 {
        let mut seen = seeds & within;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for w in bits(frontier) {
                next |= step[w];
            }
            next &= within & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    }
}

/// Key ordering paths of equal demand: direct arcs by id, then by first internal vertex.
type Key = (u8, usize);

struct PairSearch<'p, 'g> {
    prep: &'p Prep<'g>,
    u: Vertex,
    v: Vertex,
    mode: Mode,
    direct: Vec<ArcId>,
    demands: Vec<usize>,
    free: u128,
    paths: Vec<DiPath>,
    explored: &'p Counter,
}

impl<'p, 'g> PairSearch<'p, 'g> {
    /// Runs the search for tail `u` and head `v` inside the vertex set `allowed`.
    fn run(
        prep: &'p Prep<'g>,
        u: Vertex,
        v: Vertex,
        mode: Mode,
        demands: &[usize],
        allowed: u128,
        explored: &'p Counter,
    ) -> Option<SpindleWitness> {
        let mut s = PairSearch {
            prep,
            u,
            v,
            mode,
            direct: prep.g.arcs_between(u, v).collect(),
            demands: demands.to_vec(),
            free: allowed & !(1 << u) & !(1 << v),
            paths: Vec::new(),
            explored,
        };
        s.solve(None).then_some(SpindleWitness { tail: u, head: v, paths: s.paths })
    }

    fn usable(&self) -> u128 {
        let p = self.prep;
        let fwd = p.closure(p.out_mask[self.u], self.free, &p.out_mask);
        let bwd = p.closure(p.in_mask[self.v], self.free, &p.in_mask);
        fwd & bwd
    }

    fn direct_unused(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.direct.iter().copied().filter(|&a| !self.paths.iter().any(|p| p.arcs == [a]))
    }

    fn solve(&mut self, prev: Option<(usize, Key)>) -> bool {
        if self.demands.is_empty() {
            return true;
        }
        self.explored.bump();
        let usable = self.usable();
        let cnt = usable.count_ones() as usize;
        let need: usize = self.demands.iter().map(|d| d - 1).sum();
        if need > cnt {
            return false;
        }
        let unused = self.direct_unused().count();
        let outs = (self.prep.out_mask[self.u] & usable).count_ones() as usize;
        let ins = (self.prep.in_mask[self.v] & usable).count_ones() as usize;
        let long = self.demands.iter().filter(|&&d| d >= 2).count();
        let total = self.demands.len();
        if long > outs.min(ins) || total > outs.min(ins) + unused {
            return false;
        }
        if need == cnt {
            return if cnt == 0 { self.finish_direct() } else { self.cover(usable) };
        }

        let d = self.demands.remove(0);
        let rest: usize = self.demands.iter().map(|d| d - 1).sum();
        let lo = d - 1;
        let hi = match self.mode {
            Mode::Subdivision => cnt - rest,
            Mode::ExactSubgraph => d - 1,
        };
        let prev_key = prev.filter(|&(pd, _)| pd == d).map(|(_, k)| k);
        let mut found = false;
        if d == 1 {
            let options: Vec<ArcId> = self.direct_unused().collect();
            for a in options {
                if prev_key.is_some_and(|k| (0, a) <= k) {
                    continue;
                }
                self.paths.push(DiPath { vertices: vec![self.u, self.v], arcs: vec![a] });
                if self.solve(Some((d, (0, a)))) {
                    found = true;
                } else {
                    self.paths.pop();
                }
                // parallel direct arcs are interchangeable
                break;
            }
        }
        if !found && hi >= 1 && hi >= lo {
            let mut walk = Walk { vertices: vec![self.u], arcs: Vec::new(), internal: 0 };
            found = self.extend(&mut walk, usable, 0, lo, hi, d, prev_key, false);
        }
        if !found {
            self.demands.insert(0, d);
        }
        found
    }

    fn finish_direct(&mut self) -> bool {
        let options: Vec<ArcId> = self.direct_unused().take(self.demands.len()).collect();
        if options.len() < self.demands.len() {
            return false;
        }
        for a in options {
            self.paths.push(DiPath { vertices: vec![self.u, self.v], arcs: vec![a] });
        }
        self.demands.clear();
        true
    }

    /// Every usable vertex must be covered: branch on the lowest one.
    fn cover(&mut self, usable: u128) -> bool {
        let z = 1u128 << usable.trailing_zeros();
        let mut values: Vec<usize> = self.demands.iter().copied().filter(|&d| d >= 2).collect();
        values.dedup();
        for d in values {
            let idx = self.demands.iter().position(|&x| x == d).unwrap();
            self.demands.remove(idx);
            let mut walk = Walk { vertices: vec![self.u], arcs: Vec::new(), internal: 0 };
            if self.extend(&mut walk, usable, z, d - 1, d - 1, d, None, true) {
                return true;
            }
            self.demands.insert(idx, d);
        }
        false
    }

    /// Extends `walk` towards the head; each completed path is tried with the
    /// remaining demands.
    #[allow(clippy::too_many_arguments)]
    fn extend(
        &mut self,
        walk: &mut Walk,
        allowed: u128,
        must: u128,
        lo: usize,
        hi: usize,
        d: usize,
        prev_key: Option<Key>,
        cover: bool,
    ) -> bool {
        let cur = *walk.vertices.last().unwrap();
        let count = walk.vertices.len() - 1;
        let prep = self.prep;
        for &(w, arc) in &prep.out_list[cur] {
            if w == self.v {
                if cur == self.u || count < lo || walk.internal & must != must {
                    continue;
                }
                let key = (1, walk.vertices[1]);
                walk.vertices.push(w);
                walk.arcs.push(arc);
                self.paths.push(DiPath { vertices: walk.vertices.clone(), arcs: walk.arcs.clone() });
                self.free &= !walk.internal;
                let next_prev = if cover { None } else { Some((d, key)) };
                if self.solve(next_prev) {
                    return true;
                }
                self.free |= walk.internal;
                self.paths.pop();
                walk.vertices.pop();
                walk.arcs.pop();
                continue;
            }
            let bit = 1u128 << w;
            if allowed & bit == 0 || walk.internal & bit != 0 || count >= hi {
                continue;
            }
            if cur == self.u && prev_key.is_some_and(|k| (1, w) <= k) {
                continue;
            }
            // in cover mode the lowest vertex must still fit in the budget
            if must != 0 && walk.internal & must == 0 && bit != must && count + 1 >= hi {
                continue;
            }
            walk.vertices.push(w);
            walk.arcs.push(arc);
            walk.internal |= bit;
            if self.extend(walk, allowed, must, lo, hi, d, prev_key, cover) {
                return true;
            }
            walk.internal &= !bit;
            walk.vertices.pop();
            walk.arcs.pop();
        }
        false
    }
}

struct Walk {
    vertices: Vec<Vertex>,
    arcs: Vec<ArcId>,
    internal: u128,
}

/// For a fixed endpoint pair, which sets of internal vertices carry a path.
struct RouteTable {
    /// global vertex of each local index
    others: Vec<Vertex>,
    /// `feasible[mask]`: some tail-to-head path has internal vertex set `mask`
    feasible: Vec<bool>,
    direct: usize,
    u: Vertex,
    v: Vertex,
}

impl RouteTable {
    fn new(g: &Digraph, u: Vertex, v: Vertex) -> Self {
        let n = g.vertex_count();
        let others: Vec<Vertex> = (0..n).filter(|&w| w != u && w != v).collect();
        let m = others.len();
        let mut local = vec![usize::MAX; n];
        for (i, &w) in others.iter().enumerate() {
            local[w] = i;
        }
        let mut succ = vec![0u32; m];
        let mut from_u = 0u32;
        let mut into_v = 0u32;
        for &(a, b) in g.arcs() {
            match (local[a], local[b]) {
                (i, j) if i != usize::MAX && j != usize::MAX => succ[i] |= 1 << j,
                (i, _) if i != usize::MAX && b == v => into_v |= 1 << i,
                (_, j) if j != usize::MAX && a == u => from_u |= 1 << j,
                _ => {}
            }
        }
        // ends[mask]: last vertices of u-paths whose internal set is mask
        let mut ends = vec![0u32; 1 << m];
        for j in 0..m {
            if from_u >> j & 1 == 1 {
                ends[1 << j] |= 1 << j;
            }
        }
        let mut feasible = vec![false; 1 << m];
        for mask in 1..(1usize << m) {
            let e = ends[mask];
            if e == 0 {
                continue;
            }
            feasible[mask] = e & into_v != 0;
            let mut rest = e;
            while rest != 0 {
                let w = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let mut nxt = succ[w] & !(mask as u32);
                while nxt != 0 {
                    let x = nxt.trailing_zeros() as usize;
                    nxt &= nxt - 1;
                    ends[mask | 1 << x] |= 1 << x;
                }
            }
        }
        let direct = g.arcs_between(u, v).count();
        Self { others, feasible, direct, u, v }
    }

    fn best_pair(&self) -> usize {
        let m = self.others.len();
        let full = (1usize << m) - 1;
        // sub[mask]: largest nonempty feasible subset of mask, or -1
        let mut sub: Vec<i32> = (0..=full).map(|s| if self.feasible[s] { s.count_ones() as i32 } else { -1 }).collect();
        for b in 0..m {
            for s in 0..=full {
                if s >> b & 1 == 1 {
                    sub[s] = sub[s].max(sub[s ^ (1 << b)]);
                }
            }
        }
        let mut best = if self.direct >= 2 { 2 } else { 0 };
        for a in 1..=full {
            if !self.feasible[a] {
                continue;
            }
            let len_a = a.count_ones() as usize + 1;
            let other = sub[full & !a];
            if other >= 0 {
                best = best.max(len_a + other as usize + 1);
            } else if self.direct >= 1 {
                best = best.max(len_a + 1);
            }
        }
        best
    }

    /// Vertex sets (as global masks) of all 2-spindles with these endpoints.
    fn spindle_sets(&self) -> Vec<(u128, (Vertex, Vertex))> {
        let ends = (1u128 << self.u) | (1u128 << self.v);
        let global = |s: usize| -> u128 {
            let mut g = ends;
            let mut rest = s;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                g |= 1 << self.others[i];
            }
            g
        };
        let mut masks: Vec<usize> = (1..self.feasible.len()).filter(|&s| self.feasible[s]).collect();
        let mut out = Vec::new();
        if self.direct >= 1 {
            if self.direct >= 2 {
                out.push((ends, (self.u, self.v)));
            }
            out.extend(masks.iter().map(|&s| (global(s), (self.u, self.v))));
        }
        masks.sort_unstable_by_key(|s| s.count_ones());
        for (i, &a) in masks.iter().enumerate() {
            for &b in &masks[i + 1..] {
                if a & b == 0 {
                    out.push((global(a | b), (self.u, self.v)));
                }
            }
        }
        out
    }
}
