//! Multidigraphs, directed paths, spindle specifications and witnesses.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub type Vertex = usize;
/// Position of an arc in the arc list of its digraph.
pub type ArcId = usize;

/// A finite multidigraph on vertices `0..n` without self-loops.
///
/// Parallel arcs are allowed and keep distinct identities: arc `i` is the
/// `i`-th entry of the list the digraph was built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(Vertex, Vertex)>,
    out: Vec<Vec<ArcId>>,
    inc: Vec<Vec<ArcId>>,
}

impl Digraph {
    pub fn new(n: usize, arcs: Vec<(Vertex, Vertex)>) -> Result<Self> {
        for (i, &(a, b)) in arcs.iter().enumerate() {
            if a >= n || b >= n {
                return Err(invalid(format!("arc {i} = ({a},{b}) has an endpoint outside 0..{n}")));
            }
            if a == b {
                return Err(invalid(format!("arc {i} is a self-loop at {a}")));
            }
        }
        Ok(Self::build(n, arcs))
    }

    fn build(n: usize, arcs: Vec<(Vertex, Vertex)>) -> Self {
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (i, &(a, b)) in arcs.iter().enumerate() {
            out[a].push(i);
            inc[b].push(i);
        }
        Self { n, arcs, out, inc }
    }

    pub fn empty(n: usize) -> Self {
        Self::build(n, Vec::new())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(Vertex, Vertex)] {
        &self.arcs
    }

    #[inline]
    pub fn arc(&self, id: ArcId) -> (Vertex, Vertex) {
        self.arcs[id]
    }

    #[inline]
    pub fn tail(&self, id: ArcId) -> Vertex {
        self.arcs[id].0
    }

    #[inline]
    pub fn head(&self, id: ArcId) -> Vertex {
        self.arcs[id].1
    }

    /// Arcs leaving `v`, in arc-id order.
    #[inline]
    pub fn out_arcs(&self, v: Vertex) -> &[ArcId] {
        &self.out[v]
    }

    /// Arcs entering `v`, in arc-id order.
    #[inline]
    pub fn in_arcs(&self, v: Vertex) -> &[ArcId] {
        &self.inc[v]
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.inc[v].len()
    }

    /// Distinct out-neighbours of `v`, ascending.
    pub fn out_neighbors(&self, v: Vertex) -> Vec<Vertex> {
        let mut ns: Vec<Vertex> = self.out[v].iter().map(|&a| self.arcs[a].1).collect();
        ns.sort_unstable();
        ns.dedup();
        ns
    }

    /// Distinct in-neighbours of `v`, ascending.
    pub fn in_neighbors(&self, v: Vertex) -> Vec<Vertex> {
        let mut ns: Vec<Vertex> = self.inc[v].iter().map(|&a| self.arcs[a].0).collect();
        ns.sort_unstable();
        ns.dedup();
        ns
    }

    /// Arc ids from `u` to `v`.
    pub fn arcs_between(&self, u: Vertex, v: Vertex) -> impl Iterator<Item = ArcId> + '_ {
        self.out[u].iter().copied().filter(move |&a| self.arcs[a].1 == v)
    }

    pub fn is_acyclic(&self) -> bool {
        topological_order(self).is_some()
    }
}

/// A directed path given by its vertex sequence and the identities of the arcs used.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiPath {
    pub vertices: Vec<Vertex>,
    pub arcs: Vec<ArcId>,
}

impl DiPath {
    pub fn trivial(v: Vertex) -> Self {
        Self { vertices: vec![v], arcs: Vec::new() }
    }

    /// Path following the given arcs from `start`.
    pub fn from_arcs(g: &Digraph, start: Vertex, arcs: Vec<ArcId>) -> Self {
        let mut vertices = Vec::with_capacity(arcs.len() + 1);
        vertices.push(start);
        for &a in &arcs {
            vertices.push(g.head(a));
        }
        Self { vertices, arcs }
    }

    /// Number of arcs.
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn first(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn last(&self) -> Vertex {
        *self.vertices.last().expect("path has at least one vertex")
    }

    pub fn internal(&self) -> &[Vertex] {
        if self.vertices.len() <= 2 {
            &[]
        } else {
            &self.vertices[1..self.vertices.len() - 1]
        }
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn concat(mut self, other: &DiPath) -> DiPath {
        debug_assert_eq!(self.last(), other.first());
        self.vertices.extend_from_slice(&other.vertices[1..]);
        self.arcs.extend_from_slice(&other.arcs);
        self
    }

    /// Checks that the path is simple and follows arcs of `g`.
    pub fn is_valid_in(&self, g: &Digraph) -> bool {
        if self.vertices.is_empty() || self.arcs.len() + 1 != self.vertices.len() {
            return false;
        }
        if self.vertices.iter().any(|&v| v >= g.vertex_count()) {
            return false;
        }
        let mut seen = HashSet::with_capacity(self.vertices.len());
        if !self.vertices.iter().all(|v| seen.insert(*v)) {
            return false;
        }
        self.arcs
            .iter()
            .enumerate()
            .all(|(i, &a)| a < g.arc_count() && g.arc(a) == (self.vertices[i], self.vertices[i + 1]))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Required lengths are lower bounds.
    Subdivision,
    /// Required lengths are met exactly.
    ExactSubgraph,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpindleSpec {
    pub lengths: Vec<usize>,
    pub mode: Mode,
}

impl SpindleSpec {
    pub fn new(lengths: Vec<usize>, mode: Mode) -> Result<Self> {
        if lengths.is_empty() {
            return Err(invalid("a spindle needs at least one path"));
        }
        if lengths.contains(&0) {
            return Err(invalid("spindle path lengths must be positive"));
        }
        Ok(Self { lengths, mode })
    }

    pub fn subdivision(lengths: Vec<usize>) -> Result<Self> {
        Self::new(lengths, Mode::Subdivision)
    }

    pub fn exact(lengths: Vec<usize>) -> Result<Self> {
        Self::new(lengths, Mode::ExactSubgraph)
    }

    /// `(k x l)`-spindle.
    pub fn uniform(k: usize, ell: usize, mode: Mode) -> Result<Self> {
        Self::new(vec![ell; k], mode)
    }

    pub fn k(&self) -> usize {
        self.lengths.len()
    }
}

/// A system of internally disjoint tail-to-head paths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpindleWitness {
    pub tail: Vertex,
    pub head: Vertex,
    pub paths: Vec<DiPath>,
}

impl SpindleWitness {
    pub fn lengths(&self) -> Vec<usize> {
        self.paths.iter().map(DiPath::len).collect()
    }

    pub fn total_length(&self) -> usize {
        self.paths.iter().map(DiPath::len).sum()
    }
}

/// Why a witness was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessDefect {
    PathCount { expected: usize, found: usize },
    BadPath(usize),
    WrongEnds(usize),
    EmptyPath(usize),
    SharedVertex(Vertex),
    SharedArc(ArcId),
    Lengths,
}

/// Structural check of `w` against `g`: every path is a simple tail-to-head path of
/// length at least one, paths share only the tail and head, and arcs are not reused.
pub fn check_structure(g: &Digraph, w: &SpindleWitness) -> Result<(), WitnessDefect> {
    let mut internal = HashSet::new();
    let mut arcs = HashSet::new();
    for (i, p) in w.paths.iter().enumerate() {
        if !p.is_valid_in(g) {
            return Err(WitnessDefect::BadPath(i));
        }
        if p.first() != w.tail || p.last() != w.head {
            return Err(WitnessDefect::WrongEnds(i));
        }
        if p.is_empty() {
            return Err(WitnessDefect::EmptyPath(i));
        }
        for &v in p.internal() {
            if !internal.insert(v) {
                return Err(WitnessDefect::SharedVertex(v));
            }
        }
        for &a in &p.arcs {
            if !arcs.insert(a) {
                return Err(WitnessDefect::SharedArc(a));
            }
        }
    }
    Ok(())
}

/// Full check of `w` against `g` and `spec`, reporting the first defect found.
pub fn check_witness(g: &Digraph, spec: &SpindleSpec, w: &SpindleWitness) -> Result<(), WitnessDefect> {
    if w.paths.len() != spec.k() {
        return Err(WitnessDefect::PathCount { expected: spec.k(), found: w.paths.len() });
    }
    check_structure(g, w)?;
    if lengths_fit(&spec.lengths, &w.lengths(), spec.mode) {
        Ok(())
    } else {
        Err(WitnessDefect::Lengths)
    }
}

/// True iff there is a bijection from `required` to `actual` meeting each requirement.
///
/// Sorting both sides decides this: for lower bounds the sorted pairing is
/// optimal, for exact lengths the multisets must coincide.
pub fn lengths_fit(required: &[usize], actual: &[usize], mode: Mode) -> bool {
    if required.len() != actual.len() {
        return false;
    }
    let mut r = required.to_vec();
    let mut a = actual.to_vec();
    r.sort_unstable();
    a.sort_unstable();
    match mode {
        Mode::Subdivision => r.iter().zip(&a).all(|(r, a)| a >= r),
        Mode::ExactSubgraph => r == a,
    }
}

pub fn validate_witness(g: &Digraph, spec: &SpindleSpec, w: &SpindleWitness) -> bool {
    check_witness(g, spec, w).is_ok()
}

/// Parses the `n m` header plus `m` arc lines format. Lines starting with `#`
/// and blank lines are skipped.
pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields = parse_pair(line, line_no)?;
        match header {
            None => header = Some(fields),
            Some((n, m)) => {
                if arcs.len() == m {
                    return Err(Error::Parse { line: line_no, message: format!("more than {m} arcs") });
                }
                let (a, b) = fields;
                if a >= n || b >= n {
                    return Err(Error::Parse { line: line_no, message: format!("vertex id out of range 0..{n}") });
                }
                if a == b {
                    return Err(Error::Parse { line: line_no, message: "self-loop".into() });
                }
                arcs.push((a, b));
            }
        }
    }
    let (n, m) = header.ok_or(Error::Parse { line: last_line.max(1), message: "missing header".into() })?;
    if arcs.len() != m {
        return Err(Error::Parse {
            line: last_line.max(1),
            message: format!("expected {m} arcs, found {}", arcs.len()),
        });
    }
    Ok(Digraph::build(n, arcs))
}

fn parse_pair(line: &str, line_no: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::Parse { line: line_no, message: "expected two integers".into() })?
            .parse::<usize>()
            .map_err(|e| Error::Parse { line: line_no, message: format!("malformed integer: {e}") })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Parse { line: line_no, message: "expected exactly two integers".into() });
    }
    Ok((a, b))
}

pub fn serialize_digraph(g: &Digraph) -> String {
    let mut s = String::with_capacity(8 * (g.arc_count() + 1));
    writeln!(s, "{} {}", g.vertex_count(), g.arc_count()).unwrap();
    for &(a, b) in g.arcs() {
        writeln!(s, "{a} {b}").unwrap();
    }
    s
}

/// Kahn's algorithm, always releasing the smallest available vertex, so a
/// digraph has a unique answer. `None` when `g` has a directed cycle.
pub fn topological_order(g: &Digraph) -> Option<Vec<Vertex>> {
    let n = g.vertex_count();
    let mut indeg: Vec<usize> = (0..n).map(|v| g.in_degree(v)).collect();
    let mut ready: BinaryHeap<Reverse<Vertex>> = (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        for &a in g.out_arcs(v) {
            let w = g.head(a);
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.push(Reverse(w));
            }
        }
    }
    (order.len() == n).then_some(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spindle432() -> Digraph {
        Digraph::new(8, vec![(0, 2), (2, 3), (3, 4), (4, 1), (0, 5), (5, 6), (6, 1), (0, 7), (7, 1)]).unwrap()
    }

    fn spindle432_witness() -> SpindleWitness {
        let g = spindle432();
        SpindleWitness {
            tail: 0,
            head: 1,
            paths: vec![
                DiPath::from_arcs(&g, 0, vec![0, 1, 2, 3]),
                DiPath::from_arcs(&g, 0, vec![4, 5, 6]),
                DiPath::from_arcs(&g, 0, vec![7, 8]),
            ],
        }
    }

    #[test]
    fn parses_single_arc() {
        let g = parse_digraph("2 1\n0 1\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.arcs(), &[(0, 1)]);
    }

    #[test]
    fn keeps_parallel_arcs() {
        let g = parse_digraph("2 2\n0 1\n0 1\n").unwrap();
        assert_eq!(g.arcs(), &[(0, 1), (0, 1)]);
        assert_eq!(g.arcs_between(0, 1).count(), 2);
    }

    #[test]
    fn rejects_self_loop_with_line_number() {
        let err = parse_digraph("2 1\n0 0\n").unwrap_err();
        assert_eq!(err.to_string(), "self-loop at line 2");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_digraph("2 1\n0 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_digraph("x 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_digraph("2 2\n0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_digraph("2 1\n0 1\n1 0\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_digraph("2 1 5\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_digraph("# nothing\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn comments_are_ignored() {
        let g = parse_digraph("# header next\n3 1\n# arc\n1 2\n").unwrap();
        assert_eq!(g.arcs(), &[(1, 2)]);
    }

    #[test]
    fn serializes() {
        assert_eq!(serialize_digraph(&Digraph::new(2, vec![(0, 1)]).unwrap()), "2 1\n0 1\n");
        assert_eq!(serialize_digraph(&Digraph::empty(3)), "3 0\n");
    }

    #[test]
    fn topological_orders() {
        let path = Digraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(topological_order(&path), Some(vec![0, 1, 2]));
        let cycle = Digraph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        assert_eq!(topological_order(&cycle), None);
    }

    #[test]
    fn spindle432_witness_validates() {
        let g = spindle432();
        let w = spindle432_witness();
        assert!(validate_witness(&g, &SpindleSpec::uniform(3, 2, Mode::Subdivision).unwrap(), &w));
        assert!(!validate_witness(&g, &SpindleSpec::uniform(3, 3, Mode::Subdivision).unwrap(), &w));
        assert!(validate_witness(&g, &SpindleSpec::exact(vec![2, 4, 3]).unwrap(), &w));
        assert!(!validate_witness(&g, &SpindleSpec::exact(vec![2, 2, 3]).unwrap(), &w));
    }

    #[test]
    fn single_arc_is_a_one_spindle() {
        let g = Digraph::new(2, vec![(0, 1)]).unwrap();
        let w = SpindleWitness { tail: 0, head: 1, paths: vec![DiPath::from_arcs(&g, 0, vec![0])] };
        assert!(validate_witness(&g, &SpindleSpec::subdivision(vec![1]).unwrap(), &w));
    }

    #[test]
    fn shared_internal_vertex_is_rejected() {
        let g = Digraph::new(3, vec![(0, 2), (2, 1), (0, 2), (2, 1)]).unwrap();
        let w = SpindleWitness {
            tail: 0,
            head: 1,
            paths: vec![DiPath::from_arcs(&g, 0, vec![0, 1]), DiPath::from_arcs(&g, 0, vec![2, 3])],
        };
        assert_eq!(check_structure(&g, &w), Err(WitnessDefect::SharedVertex(2)));
    }

    #[test]
    fn reused_parallel_arc_is_rejected() {
        let g = Digraph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let spec = SpindleSpec::subdivision(vec![1, 1]).unwrap();
        let same = SpindleWitness {
            tail: 0,
            head: 1,
            paths: vec![DiPath::from_arcs(&g, 0, vec![0]), DiPath::from_arcs(&g, 0, vec![0])],
        };
        assert!(!validate_witness(&g, &spec, &same));
        let distinct = SpindleWitness {
            tail: 0,
            head: 1,
            paths: vec![DiPath::from_arcs(&g, 0, vec![0]), DiPath::from_arcs(&g, 0, vec![1])],
        };
        assert!(validate_witness(&g, &spec, &distinct));
    }

    #[test]
    fn witness_json_shape() {
        let w = spindle432_witness();
        let json = serde_json::to_value(&w).unwrap();
        assert_eq!(json["paths"][2]["vertices"], serde_json::json!([0, 7, 1]));
        assert_eq!(json["paths"][2]["arcs"], serde_json::json!([7, 8]));
        let back: SpindleWitness = serde_json::from_value(json).unwrap();
        assert_eq!(back, w);
    }
}
