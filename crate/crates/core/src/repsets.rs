//! q-representative families over the uniform matroid.
//!
//! The uniform matroid of rank `r` on `n` elements is represented by an
//! `r x n` Vandermonde matrix over a prime field: any `r` columns are
//! independent. A `p`-set `A` is mapped to the vector of all `p x p` minors of
//! its columns (its exterior product). For a `q`-set `B` with `p + q = r`,
//! `A ∪ B` is independent iff `A` and `B` are disjoint, and the determinant of
//! the columns of `A ∪ B` is linear in `A`'s vector. So any basis of the span
//! of the family's vectors, drawn from the family, q-represents it.

use std::collections::HashSet;

use crate::digraph::Vertex;
use crate::error::{invalid, Error, Result};

/// Largest universe [`check_representative`] will enumerate.
pub const CHECK_LIMIT: usize = 16;

/// A family of `p`-element subsets of `0..universe`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    universe: usize,
    p: usize,
    members: Vec<Vec<Vertex>>,
}

impl SetFamily {
    /// Members are sorted internally; duplicates after the first are dropped.
    pub fn new(universe: usize, p: usize, members: Vec<Vec<Vertex>>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut kept = Vec::with_capacity(members.len());
        for mut m in members {
            m.sort_unstable();
            m.dedup();
            if m.len() != p {
                return Err(invalid(format!("member {m:?} does not have {p} elements")));
            }
            if m.iter().any(|&v| v >= universe) {
                return Err(invalid(format!("member {m:?} leaves the universe 0..{universe}")));
            }
            if seen.insert(m.clone()) {
                kept.push(m);
            }
        }
        Ok(Self { universe, p, members: kept })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn members(&self) -> &[Vec<Vertex>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Field and matrix data for trimming against a matroid of fixed rank.
#[derive(Clone, Debug)]
pub struct TrimContext {
    prime: u64,
    rank: usize,
    points: Vec<u64>,
}

impl TrimContext {
    /// Uses the smallest prime above `max(n, 100)` and points `1..=n`.
    pub fn new(n: usize, rank: usize) -> Self {
        let mut prime = n.max(100) as u64 + 1;
        while !is_prime(prime) {
            prime += 1;
        }
        Self { prime, rank, points: (1..=n as u64).collect() }
    }

    pub fn with_prime(n: usize, rank: usize, prime: u64) -> Result<Self> {
        if !is_prime(prime) {
            return Err(invalid(format!("modulus {prime} is not prime")));
        }
        if prime <= n as u64 {
            return Err(invalid(format!("modulus {prime} must exceed the universe size {n}")));
        }
        if prime >= 1 << 32 {
            return Err(invalid("modulus must fit in 32 bits"));
        }
        Ok(Self { prime, rank, points: (1..=n as u64).collect() })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }
}

fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= x {
        if x.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn inv_mod(x: u64, m: u64) -> u64 {
    pow_mod(x, m - 2, m)
}

fn det_mod(mut a: Vec<Vec<u64>>, m: u64) -> u64 {
    let k = a.len();
    let mut det = 1u64;
    for col in 0..k {
        let Some(piv) = (col..k).find(|&r| a[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            a.swap(piv, col);
            det = (m - det) % m;
        }
        det = det * a[col][col] % m;
        let inv = inv_mod(a[col][col], m);
        for r in col + 1..k {
            if a[r][col] == 0 {
                continue;
            }
            let f = a[r][col] * inv % m;
            for c in col..k {
                a[r][c] = (a[r][c] + m - f * a[col][c] % m) % m;
            }
        }
    }
    det
}

/// All `p`-subsets of `0..r` in lexicographic order.
fn subsets(r: usize, p: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p);
    fn rec(start: usize, r: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..r {
            if r - i < p - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, r, p, cur, out);
            cur.pop();
        }
    }
    rec(0, r, p, &mut cur, &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Incrementally maintained row-echelon basis over `Z_p`.
struct Basis {
    m: u64,
    rows: Vec<(usize, Vec<u64>)>, // (pivot column, row normalised to pivot 1)
}

impl Basis {
    fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let m = self.m;
        for (piv, row) in &self.rows {
            let f = v[*piv];
            if f != 0 {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = (*x + m - f * y % m) % m;
                }
            }
        }
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(v[piv], m);
        for x in &mut v {
            *x = *x * inv % m;
        }
        // keep earlier rows reduced against the new pivot
        for (_, row) in &mut self.rows {
            let f = row[piv];
            if f != 0 {
                for (x, &y) in row.iter_mut().zip(&v) {
                    *x = (*x + m - f * y % m) % m;
                }
            }
        }
        self.rows.push((piv, v));
        true
    }
}

/// Indices of a q-representative subfamily of `sets` (each a sorted `p`-set),
/// in input order. Returns every index when the universe is smaller than `p + q`.
pub(crate) fn trim_indices(sets: &[Vec<Vertex>], p: usize, q: usize, ctx: &TrimContext) -> Vec<usize> {
    let r = p + q;
    let n = ctx.points.len();
    if n < r || sets.is_empty() {
        return (0..sets.len()).collect();
    }
    let m = ctx.prime;
    let rows = subsets(r, p);
    let bound = rows.len();
    let mut basis = Basis { m, rows: Vec::new() };
    let mut kept = Vec::new();
    for (i, set) in sets.iter().enumerate() {
        // powers[c][e] = x_c^e
        let powers: Vec<Vec<u64>> = set
            .iter()
            .map(|&v| {
                let x = ctx.points[v];
                let mut acc = 1u64;
                (0..r)
                    .map(|_| {
                        let cur = acc;
                        acc = acc * x % m;
                        cur
                    })
                    .collect()
            })
            .collect();
        let vector: Vec<u64> = rows
            .iter()
            .map(|rs| {
                let mat = rs.iter().map(|&e| powers.iter().map(|col| col[e]).collect()).collect();
                det_mod(mat, m)
            })
            .collect();
        if basis.insert(vector) {
            kept.push(i);
            if kept.len() == bound {
                break;
            }
        }
    }
    kept
}

/// A q-representative subfamily of `f` with at most `C(p+q, p)` members.
pub fn trim(f: &SetFamily, q: usize, ctx: &TrimContext) -> Result<SetFamily> {
    if ctx.rank != f.p + q {
        return Err(invalid(format!("context rank {} differs from p + q = {}", ctx.rank, f.p + q)));
    }
    if ctx.points.len() < f.universe {
        return Err(invalid("context has fewer points than the universe"));
    }
    let kept = trim_indices(&f.members, f.p, q, ctx);
    Ok(SetFamily { universe: f.universe, p: f.p, members: kept.into_iter().map(|i| f.members[i].clone()).collect() })
}

/// Trims the concatenation of families sharing `p` and the universe.
pub fn union_families(fs: &[SetFamily], q: usize, ctx: &TrimContext) -> Result<SetFamily> {
    let Some(first) = fs.first() else {
        return Err(invalid("no families to unite"));
    };
    if fs.iter().any(|f| f.p != first.p || f.universe != first.universe) {
        return Err(invalid("families differ in set size or universe"));
    }
    let all = fs.iter().flat_map(|f| f.members.iter().cloned()).collect();
    trim(&SetFamily::new(first.universe, first.p, all)?, q, ctx)
}

/// Whether `sub` q-represents `f`, by trying every `q`-subset of the universe.
pub fn check_representative(f: &SetFamily, sub: &SetFamily, q: usize) -> Result<bool> {
    let n = f.universe.max(sub.universe);
    if n > CHECK_LIMIT {
        return Err(Error::GuardExceeded { size: n, guard: CHECK_LIMIT });
    }
    let mask = |s: &Vec<Vertex>| s.iter().fold(0u32, |acc, &v| acc | 1 << v);
    let fm: Vec<u32> = f.members.iter().map(mask).collect();
    let sm: Vec<u32> = sub.members.iter().map(mask).collect();
    if q > n {
        return Ok(true);
    }
    for b in subsets(n, q) {
        let bm = b.iter().fold(0u32, |acc, &v| acc | 1 << v);
        let needed = fm.iter().any(|&a| a & bm == 0);
        if needed && !sm.iter().any(|&a| a & bm == 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn primes() {
        assert_eq!(TrimContext::new(10, 3).prime(), 101);
        assert_eq!(TrimContext::new(200, 3).prime(), 211);
        assert!(TrimContext::with_prime(10, 3, 91).is_err());
        assert!(TrimContext::with_prime(10, 3, 7).is_err());
    }

    #[test]
    fn tight_family_is_kept_whole() {
        let (p, q) = (2, 2);
        let members: Vec<Vec<usize>> = subsets(p + q, p);
        let f = SetFamily::new(p + q, p, members).unwrap();
        let t = trim(&f, q, &TrimContext::new(p + q, p + q)).unwrap();
        assert_eq!(t, f);
    }

    #[test]
    fn q_zero_keeps_one() {
        let f = SetFamily::new(6, 2, vec![vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        let t = trim(&f, 0, &TrimContext::new(6, 2)).unwrap();
        assert_eq!(t.members(), &[vec![0, 1]]);
    }

    #[test]
    fn rank_mismatch() {
        let f = SetFamily::new(6, 2, vec![vec![0, 1]]).unwrap();
        assert!(trim(&f, 1, &TrimContext::new(6, 4)).is_err());
    }

    #[test]
    fn checker_counterexample() {
        let f = SetFamily::new(2, 1, vec![vec![0], vec![1]]).unwrap();
        let sub = SetFamily::new(2, 1, vec![vec![0]]).unwrap();
        assert!(!check_representative(&f, &sub, 1).unwrap());
        assert!(check_representative(&f, &f, 1).unwrap());
    }

    #[test]
    fn checker_refuses_large_universe() {
        let f = SetFamily::new(20, 1, vec![vec![0]]).unwrap();
        assert!(matches!(check_representative(&f, &f, 1), Err(Error::GuardExceeded { .. })));
    }

    #[test]
    fn union_of_two_singletons() {
        let a = SetFamily::new(4, 1, vec![vec![0]]).unwrap();
        let b = SetFamily::new(4, 1, vec![vec![1]]).unwrap();
        let ctx = TrimContext::new(4, 2);
        let u = union_families(&[a.clone(), b.clone()], 1, &ctx).unwrap();
        let whole = SetFamily::new(4, 1, vec![vec![0], vec![1]]).unwrap();
        assert!(check_representative(&whole, &u, 1).unwrap());
        assert_eq!(u.len(), 2);
        let mixed = SetFamily::new(4, 2, vec![vec![0, 1]]).unwrap();
        assert!(union_families(&[a, mixed], 1, &ctx).is_err());
    }

    #[test]
    fn duplicates_collapse() {
        let f = SetFamily::new(4, 2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(f.len(), 1);
        assert!(SetFamily::new(4, 2, vec![vec![0]]).is_err());
    }

    fn arb_family() -> impl Strategy<Value = (SetFamily, usize)> {
        (1usize..=4, 0usize..=4, 4usize..=12).prop_flat_map(|(p, q, n)| {
            let n = n.max(p + q);
            proptest::collection::vec(proptest::sample::subsequence((0..n).collect::<Vec<_>>(), p), 1..40)
                .prop_map(move |ms| (SetFamily::new(n, p, ms).unwrap(), q))
        })
    }

    proptest! {
        #[test]
        fn trim_represents((f, q) in arb_family()) {
            let ctx = TrimContext::new(f.universe(), f.p() + q);
            let t = trim(&f, q, &ctx).unwrap();
            prop_assert!(t.len() <= binomial(f.p() + q, f.p()));
            prop_assert!(t.members().iter().all(|m| f.members().contains(m)));
            prop_assert!(check_representative(&f, &t, q).unwrap());
            let again = trim(&t, q, &ctx).unwrap();
            prop_assert!(again.len() <= t.len());
            prop_assert!(check_representative(&f, &again, q).unwrap());
        }

        #[test]
        fn split_then_union((f, q) in arb_family(), cut in 0usize..40) {
            let ctx = TrimContext::new(f.universe(), f.p() + q);
            let cut = cut.min(f.len());
            let left = SetFamily::new(f.universe(), f.p(), f.members()[..cut].to_vec()).unwrap();
            let right = SetFamily::new(f.universe(), f.p(), f.members()[cut..].to_vec()).unwrap();
            let u = union_families(&[trim(&left, q, &ctx).unwrap(), trim(&right, q, &ctx).unwrap()], q, &ctx).unwrap();
            prop_assert!(check_representative(&f, &u, q).unwrap());
        }
    }
}
