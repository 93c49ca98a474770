//! Hardness reductions as deterministic instance generators.
//!
//! Fresh vertices are numbered after the source vertices, in construction
//! order. Each instance carries a target, an optional planted certificate and
//! a provenance record naming the equivalence the reduction is meant to keep.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::digraph::{check_witness, DiPath, Digraph, SpindleSpec, SpindleWitness, Vertex};
use crate::disjoint::UndirectedGraph;
use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Target {
    /// A subdivision of this spindle.
    Spindle { spec: SpindleSpec },
    /// A 2-spindle subdivision whose two lengths sum to at least `total`.
    TotalLength { total: usize },
    /// `count` pairwise vertex-disjoint `(2 x 1)`-spindle subdivisions.
    Pack { count: usize },
    /// The largest `ell` admitting a `(k x ell)`-spindle subdivision.
    MaxEll { k: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Planted {
    Spindle(SpindleWitness),
    Pack(Vec<SpindleWitness>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub reduction: String,
    /// What the reduction claims about source and target.
    pub claim: String,
    pub source: Source,
    /// Named vertex groups of the output, e.g. `s`, `t`, `fresh`.
    pub roles: BTreeMap<String, Vec<Vertex>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Source {
    Digraph { n: usize, arcs: Vec<(Vertex, Vertex)> },
    HamiltonianPath { n: usize, arcs: Vec<(Vertex, Vertex)>, s: Vertex, t: Vertex },
    ThreeDm { instance: ThreeDMInstance, solution: Option<Vec<usize>> },
    Tripartite { classes: Vec<usize>, edges: Vec<(usize, usize)> },
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratedInstance {
    #[serde(skip)]
    pub digraph: Digraph,
    pub target: Target,
    pub planted: Option<Planted>,
    pub provenance: Provenance,
}

impl GeneratedInstance {
    /// Whether the planted certificate, if any, meets the target.
    pub fn planted_is_valid(&self) -> bool {
        let g = &self.digraph;
        match (&self.planted, &self.target) {
            (None, _) => true,
            (Some(Planted::Spindle(w)), Target::Spindle { spec }) => check_witness(g, spec, w).is_ok(),
            (Some(Planted::Pack(ws)), Target::Pack { count }) => {
                let spec = SpindleSpec::subdivision(vec![1, 1]).expect("two paths");
                let mut used = vec![false; g.vertex_count()];
                let mut fresh = |w: &SpindleWitness| {
                    let mut vs: Vec<Vertex> = w.paths.iter().flat_map(|p| p.vertices.iter().copied()).collect();
                    vs.sort_unstable();
                    vs.dedup();
                    vs.into_iter().all(|v| !std::mem::replace(&mut used[v], true))
                };
                ws.len() >= *count && ws.iter().all(|w| check_witness(g, &spec, w).is_ok() && fresh(w))
            }
            _ => false,
        }
    }
}

/// Triples over `A x B x C` with `|A| = |B| = |C| = n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThreeDMInstance {
    pub n: usize,
    pub triples: Vec<(usize, usize, usize)>,
}

impl ThreeDMInstance {
    pub fn new(n: usize, triples: Vec<(usize, usize, usize)>) -> Result<Self> {
        if let Some(t) = triples.iter().find(|&&(a, b, c)| a >= n || b >= n || c >= n) {
            return Err(invalid(format!("triple {t:?} has an index outside 0..{n}")));
        }
        Ok(Self { n, triples })
    }

    /// Whether the triple indices form a perfect matching.
    pub fn is_solution(&self, chosen: &[usize]) -> bool {
        if chosen.len() != self.n {
            return false;
        }
        let mut used = vec![[false; 3]; self.n];
        let mut seen = vec![false; self.triples.len()];
        for &i in chosen {
            let Some(&(a, b, c)) = self.triples.get(i) else {
                return false;
            };
            if std::mem::replace(&mut seen[i], true) {
                return false;
            }
            for (slot, x) in [a, b, c].into_iter().enumerate() {
                if std::mem::replace(&mut used[x][slot], true) {
                    return false;
                }
            }
        }
        true
    }

    /// Exhaustive search for a perfect matching, lowest indices first.
    pub fn find_solution(&self) -> Option<Vec<usize>> {
        fn go(inst: &ThreeDMInstance, a: usize, used: &mut [[bool; 2]], chosen: &mut Vec<usize>) -> bool {
            if a == inst.n {
                return true;
            }
            for (i, &(ta, b, c)) in inst.triples.iter().enumerate() {
                if ta != a || used[b][0] || used[c][1] {
                    continue;
                }
                used[b][0] = true;
                used[c][1] = true;
                chosen.push(i);
                if go(inst, a + 1, used, chosen) {
                    return true;
                }
                chosen.pop();
                used[b][0] = false;
                used[c][1] = false;
            }
            false
        }
        let mut used = vec![[false; 2]; self.n];
        let mut chosen = Vec::new();
        go(self, 0, &mut used, &mut chosen).then_some(chosen)
    }
}

fn path_through(g: &Digraph, vertices: &[Vertex]) -> DiPath {
    let arcs = vertices
        .windows(2)
        .map(|w| g.arcs_between(w[0], w[1]).next().expect("arc laid down by the generator"))
        .collect();
    DiPath::from_arcs(g, vertices[0], arcs)
}

/// Adds `k - 1` pairs `s_i, t_i` with arcs from every source vertex into
/// `s_i`, from `t_i` to every source vertex, and an `n`-arc path `s_i -> t_i`.
pub fn gen_longest_path(g: &Digraph, k: usize) -> Result<GeneratedInstance> {
    if k < 2 {
        return Err(invalid(format!("k = {k}; the reduction needs k >= 2")));
    }
    let n = g.vertex_count();
    if n == 0 {
        return Err(invalid("source digraph is empty"));
    }
    let s: Vec<Vertex> = (0..k - 1).map(|i| n + i).collect();
    let t: Vec<Vertex> = (0..k - 1).map(|i| n + k - 1 + i).collect();
    let mut next = n + 2 * (k - 1);
    let mut arcs = g.arcs().to_vec();
    let mut fresh = Vec::new();
    for i in 0..k - 1 {
        arcs.extend((0..n).map(|v| (v, s[i])));
        arcs.extend((0..n).map(|v| (t[i], v)));
        let mut prev = s[i];
        for _ in 1..n {
            arcs.push((prev, next));
            fresh.push(next);
            prev = next;
            next += 1;
        }
        arcs.push((prev, t[i]));
    }
    let digraph = Digraph::new(next, arcs)?;
    let roles = BTreeMap::from([("s".to_string(), s), ("t".to_string(), t), ("fresh".to_string(), fresh)]);
    Ok(GeneratedInstance {
        digraph,
        target: Target::MaxEll { k },
        planted: None,
        provenance: Provenance {
            reduction: "longest-path".into(),
            claim: format!("longest path length of the source = largest ell with a ({k} x ell)-spindle subdivision"),
            source: Source::Digraph { n, arcs: g.arcs().to_vec() },
            roles,
        },
    })
}

/// Triple gadgets hung between a source `s` and sink `t`; the arcs out of `s`
/// are subdivided `ell - 4` times.
///
/// Vertices: `a_i = i`, `b_j = n + j`, `c_p = 2n + p`; triple `T` gets
/// `x0, x1, y0, y1, z0, z1` at `3n + 6T ..`; then `s`, `t`, then the
/// subdivision vertices of the arc from `s` to `v`, for increasing `v`.
pub fn gen_3dm(inst: &ThreeDMInstance, ell: usize, solution: Option<&[usize]>) -> Result<GeneratedInstance> {
    if ell < 4 {
        return Err(invalid(format!("ell = {ell}; the reduction needs ell >= 4")));
    }
    let n = inst.n;
    if n == 0 {
        return Err(invalid("3DM instance has empty ground sets"));
    }
    ThreeDMInstance::new(n, inst.triples.clone())?;
    if let Some(sol) = solution {
        if !inst.is_solution(sol) {
            return Err(invalid(format!("{sol:?} is not a perfect matching of the instance")));
        }
    }
    let m = inst.triples.len();
    let core = 3 * n + 6 * m;
    let (s, t) = (core, core + 1);
    let mut arcs = Vec::new();
    for (j, &(a, b, c)) in inst.triples.iter().enumerate() {
        let [x0, x1, y0, y1, z0, z1]: [Vertex; 6] = std::array::from_fn(|i| 3 * n + 6 * j + i);
        let (a, b, c) = (a, n + b, 2 * n + c);
        arcs.extend([(x0, x1), (x1, a), (x1, y0), (y0, y1), (y1, b), (x0, z0), (z0, z1), (z1, c)]);
    }
    let mut next = core + 2;
    let mut entry = vec![Vec::new(); core];
    for (v, chain) in entry.iter_mut().enumerate() {
        let mut prev = s;
        chain.push(s);
        for _ in 0..ell - 4 {
            arcs.push((prev, next));
            chain.push(next);
            prev = next;
            next += 1;
        }
        arcs.push((prev, v));
    }
    arcs.extend((0..core).map(|v| (v, t)));
    let digraph = Digraph::new(next, arcs)?;
    let k_star = n + 2 * m;
    let spec = SpindleSpec::uniform(k_star, ell, crate::digraph::Mode::Subdivision)?;

    let planted = solution.map(|sol| {
        let mut picked = vec![false; m];
        for &i in sol {
            picked[i] = true;
        }
        let mut paths = Vec::with_capacity(k_star);
        for (j, &(a, b, c)) in inst.triples.iter().enumerate() {
            let [x0, x1, y0, y1, z0, z1]: [Vertex; 6] = std::array::from_fn(|i| 3 * n + 6 * j + i);
            let middles: Vec<[Vertex; 3]> = if picked[j] {
                vec![[x0, x1, a], [y0, y1, n + b], [z0, z1, 2 * n + c]]
            } else {
                vec![[x1, y0, y1], [x0, z0, z1]]
            };
            for mid in middles {
                let mut vs = entry[mid[0]].clone();
                vs.extend(mid);
                vs.push(t);
                paths.push(path_through(&digraph, &vs));
            }
        }
        Planted::Spindle(SpindleWitness { tail: s, head: t, paths })
    });

    let roles = BTreeMap::from([
        ("a".to_string(), (0..n).collect()),
        ("b".to_string(), (n..2 * n).collect()),
        ("c".to_string(), (2 * n..3 * n).collect()),
        ("gadgets".to_string(), (3 * n..core).collect()),
        ("s".to_string(), vec![s]),
        ("t".to_string(), vec![t]),
        ("fresh".to_string(), (core + 2..next).collect()),
    ]);
    Ok(GeneratedInstance {
        digraph,
        target: Target::Spindle { spec },
        planted,
        provenance: Provenance {
            reduction: "3dm".into(),
            claim: format!("the instance has a perfect matching iff a ({k_star} x {ell})-spindle subdivision exists"),
            source: Source::ThreeDm { instance: inst.clone(), solution: solution.map(<[usize]>::to_vec) },
            roles,
        },
    })
}

fn hampath_common(g: &Digraph, s: Vertex, t: Vertex) -> Result<Vec<(Vertex, Vertex)>> {
    let n = g.vertex_count();
    if s >= n || t >= n {
        return Err(invalid(format!("terminals ({s}, {t}) outside 0..{n}")));
    }
    if s == t {
        return Err(invalid("s and t coincide"));
    }
    Ok(g.arcs().iter().copied().filter(|&(a, b)| b != s && a != t).collect())
}

/// Drops arcs into `s` and out of `t`, then adds `s -> v -> t` for a fresh `v`.
pub fn gen_hampath_total(g: &Digraph, s: Vertex, t: Vertex) -> Result<GeneratedInstance> {
    let mut arcs = hampath_common(g, s, t)?;
    let n = g.vertex_count();
    arcs.extend([(s, n), (n, t)]);
    Ok(GeneratedInstance {
        digraph: Digraph::new(n + 1, arcs)?,
        target: Target::TotalLength { total: n + 1 },
        planted: None,
        provenance: Provenance {
            reduction: "hampath-total".into(),
            claim: format!("a Hamiltonian ({s}, {t})-path exists iff a 2-spindle of total length {} exists", n + 1),
            source: Source::HamiltonianPath { n, arcs: g.arcs().to_vec(), s, t },
            roles: BTreeMap::from([("fresh".to_string(), vec![n])]),
        },
    })
}

/// Drops arcs into `s`, out of `t` and from `s` to `t`, then adds a fresh
/// `(s, t)`-path with `l1` arcs.
pub fn gen_hampath_fixed(g: &Digraph, s: Vertex, t: Vertex, l1: usize) -> Result<GeneratedInstance> {
    if l1 == 0 {
        return Err(invalid("l1 must be at least 1"));
    }
    let mut arcs: Vec<_> = hampath_common(g, s, t)?.into_iter().filter(|&a| a != (s, t)).collect();
    let n = g.vertex_count();
    let fresh: Vec<Vertex> = (n..n + l1 - 1).collect();
    let chain: Vec<Vertex> = std::iter::once(s).chain(fresh.iter().copied()).chain([t]).collect();
    arcs.extend(chain.windows(2).map(|w| (w[0], w[1])));
    let spec = SpindleSpec::subdivision(vec![l1, n - 1])?;
    Ok(GeneratedInstance {
        digraph: Digraph::new(n + l1 - 1, arcs)?,
        target: Target::Spindle { spec },
        planted: None,
        provenance: Provenance {
            reduction: "hampath-fixed".into(),
            claim: format!("a Hamiltonian ({s}, {t})-path exists iff a ({l1}, {})-spindle subdivision exists", n - 1),
            source: Source::HamiltonianPath { n, arcs: g.arcs().to_vec(), s, t },
            roles: BTreeMap::from([("fresh".to_string(), fresh)]),
        },
    })
}

/// Orients a tripartite graph from class 0 to 1, 1 to 2 and 0 to 2. The
/// pack count is `ceil(|E| / 3)`, which no packing reaches unless `3 | |E|`.
pub fn gen_triangle_partition(g: &UndirectedGraph, classes: &[usize]) -> Result<GeneratedInstance> {
    let n = g.vertex_count();
    if classes.len() != n {
        return Err(invalid(format!("{} class labels for {n} vertices", classes.len())));
    }
    if let Some(c) = classes.iter().find(|&&c| c > 2) {
        return Err(invalid(format!("class label {c} is not 0, 1 or 2")));
    }
    let mut arcs = Vec::with_capacity(g.edges().len());
    for &(a, b) in g.edges() {
        if classes[a] == classes[b] {
            return Err(invalid(format!("edge {{{a},{b}}} lies inside class {}", classes[a])));
        }
        arcs.push(if classes[a] < classes[b] { (a, b) } else { (b, a) });
    }
    Ok(GeneratedInstance {
        digraph: Digraph::new(n, arcs)?,
        target: Target::Pack { count: g.edges().len().div_ceil(3) },
        planted: None,
        provenance: Provenance {
            reduction: "triangles".into(),
            claim: "the edges partition into triangles iff the pack count is reached".into(),
            source: Source::Tripartite { classes: classes.to_vec(), edges: g.edges().to_vec() },
            roles: BTreeMap::new(),
        },
    })
}

/// Exhaustive search for a partition of the edges into triangles, as edge-id triples.
pub fn triangle_partition(g: &UndirectedGraph) -> Option<Vec<[usize; 3]>> {
    let m = g.edges().len();
    if !m.is_multiple_of(3) {
        return None;
    }
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    fn go(
        g: &UndirectedGraph,
        used: &mut [bool],
        out: &mut Vec<[usize; 3]>,
        key: &dyn Fn(usize, usize) -> (usize, usize),
    ) -> bool {
        let Some(e) = used.iter().position(|&u| !u) else {
            return true;
        };
        let (a, b) = g.edge(e);
        used[e] = true;
        for f in 0..used.len() {
            if used[f] {
                continue;
            }
            let (c, d) = g.edge(f);
            let w = match () {
                _ if c == a && d != b => d,
                _ if d == a && c != b => c,
                _ => continue,
            };
            for h in 0..used.len() {
                if used[h] || h == f || key(g.edge(h).0, g.edge(h).1) != key(b, w) {
                    continue;
                }
                used[f] = true;
                used[h] = true;
                out.push([e, f, h]);
                if go(g, used, out, key) {
                    return true;
                }
                out.pop();
                used[f] = false;
                used[h] = false;
            }
        }
        used[e] = false;
        false
    }
    let mut used = vec![false; m];
    let mut out = Vec::new();
    go(g, &mut used, &mut out, &key).then_some(out)
}
