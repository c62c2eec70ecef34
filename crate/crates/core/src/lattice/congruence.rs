//! Congruences, principal congruences and the monolith.

use serde::Serialize;

use super::FinLattice;
use crate::error::{Error, Result};

/// A partition of the elements, stored as normalised block ids: block ids
/// are assigned in order of first occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Congruence {
    block_of: Vec<usize>,
}

impl Congruence {
    pub fn from_block_ids(ids: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let block_of = ids
            .iter()
            .map(|&b| {
                let next = map.len();
                *map.entry(b).or_insert(next)
            })
            .collect();
        Congruence { block_of }
    }

    pub fn identity(n: usize) -> Self {
        Congruence {
            block_of: (0..n).collect(),
        }
    }

    pub fn full(n: usize) -> Self {
        Congruence {
            block_of: vec![0; n],
        }
    }

    pub fn same(&self, x: usize, y: usize) -> bool {
        self.block_of[x] == self.block_of[y]
    }

    pub fn block_ids(&self) -> &[usize] {
        &self.block_of
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let count = self.block_of.iter().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); count];
        for (x, &b) in self.block_of.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.block_of.iter().enumerate().all(|(i, &b)| i == b)
    }

    /// Every pair identified by `self` is identified by `other`.
    pub fn finer_than(&self, other: &Congruence) -> bool {
        let n = self.block_of.len();
        (0..n).all(|x| (0..n).all(|y| !self.same(x, y) || other.same(x, y)))
    }

    /// Compatibility with both operations.
    pub fn is_compatible(&self, l: &FinLattice) -> bool {
        let n = l.len();
        for x in 0..n {
            for y in x + 1..n {
                if !self.same(x, y) {
                    continue;
                }
                for c in 0..n {
                    if !self.same(l.join(x, c), l.join(y, c)) || !self.same(l.meet(x, c), l.meet(y, c))
                    {
                        return false;
                    }
                }
            }
        }
        true
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, x: usize, y: usize) -> bool {
        let (a, b) = (self.find(x), self.find(y));
        if a == b {
            return false;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.0[hi] = lo;
        true
    }
}

/// The least congruence identifying `a` and `b`.
pub fn principal_congruence(l: &FinLattice, a: usize, b: usize) -> Congruence {
    let n = l.len();
    let mut uf = UnionFind((0..n).collect());
    let mut work = vec![(l.meet(a, b), l.join(a, b))];
    // A pair already in one class has its translates pending through the
    // chain of pairs that merged it, so it can be skipped.
    while let Some((x, y)) = work.pop() {
        if !uf.union(x, y) {
            continue;
        }
        for c in 0..n {
            work.push((l.join(x, c), l.join(y, c)));
            work.push((l.meet(x, c), l.meet(y, c)));
        }
    }
    let ids: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
    let cong = Congruence::from_block_ids(&ids);
    debug_assert!(cong.is_compatible(l));
    cong
}

/// The least nonzero congruence, when there is one.
///
/// Every nonzero congruence contains `Θ(a,b)` for some covering pair, so a
/// monolith exists iff one of those is below all others.
pub fn monolith(l: &FinLattice) -> Result<Option<Congruence>> {
    if l.is_trivial() {
        return Err(Error::Precondition("the trivial lattice has no monolith".into()));
    }
    let mut thetas: Vec<Congruence> = l
        .cover_pairs()
        .into_iter()
        .map(|(a, b)| principal_congruence(l, a, b))
        .collect();
    thetas.sort();
    thetas.dedup();
    Ok(thetas
        .iter()
        .find(|t| thetas.iter().all(|o| t.finer_than(o)))
        .cloned())
}

/// Every congruence, by restricted-growth enumeration of partitions with
/// compatibility checked on decided elements. Independent of
/// [`principal_congruence`]; intended for small lattices.
pub fn all_congruences(l: &FinLattice) -> Vec<Congruence> {
    let n = l.len();
    let mut out = Vec::new();
    let mut ids = vec![0usize; n];
    fn consistent(l: &FinLattice, ids: &[usize], k: usize) -> bool {
        // pairs (x, k) identified: translates within the decided prefix agree
        for x in 0..k {
            if ids[x] != ids[k] {
                continue;
            }
            for c in 0..=k {
                for (p, q) in [(l.join(x, c), l.join(k, c)), (l.meet(x, c), l.meet(k, c))] {
                    if p <= k && q <= k && ids[p] != ids[q] {
                        return false;
                    }
                }
            }
        }
        // pairs decided earlier whose translates by k are now both decided
        for x in 0..k {
            for y in x + 1..k {
                if ids[x] != ids[y] {
                    continue;
                }
                for (p, q) in [(l.join(x, k), l.join(y, k)), (l.meet(x, k), l.meet(y, k))] {
                    if p <= k && q <= k && ids[p] != ids[q] {
                        return false;
                    }
                }
                for c in 0..k {
                    for (p, q) in [(l.join(x, c), l.join(y, c)), (l.meet(x, c), l.meet(y, c))] {
                        if (p == k || q == k) && p <= k && q <= k && ids[p] != ids[q] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
    fn go(l: &FinLattice, ids: &mut Vec<usize>, k: usize, used: usize, out: &mut Vec<Congruence>) {
        if k == l.len() {
            let c = Congruence::from_block_ids(ids);
            if c.is_compatible(l) {
                out.push(c);
            }
            return;
        }
        for b in 0..=used {
            ids[k] = b;
            if consistent(l, ids, k) {
                go(l, ids, k + 1, used.max(b + 1), out);
            }
        }
    }
    go(l, &mut ids, 0, 0, &mut out);
    out.sort();
    out
}
