//! Finite lattices stored as order matrix plus join and meet tables.

pub mod congruence;
pub mod morphism;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use congruence::{all_congruences, monolith, principal_congruence, Congruence};
pub use morphism::{
    direct_product, embedding_search, for_each_hom, isomorphism, surjection_search, HomKind,
    LatticeMap,
};

/// Table entries are `u8`, so this is a hard cap.
pub const MAX_LATTICE: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinLattice {
    n: usize,
    labels: Vec<String>,
    leq: Vec<bool>,
    join: Vec<u8>,
    meet: Vec<u8>,
    bottom: usize,
    top: usize,
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
    ji: Vec<usize>,
    is_ji: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralPredicates {
    pub distributive: bool,
    pub join_semidistributive: bool,
    pub dual_2_distributive: bool,
}

/// Lattice JSON. `leq_pairs` may be any generating set of the order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeJson {
    pub size: usize,
    pub leq_pairs: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

impl FinLattice {
    /// Builds a lattice from an order predicate. Fails unless `leq` is a
    /// partial order in which all pairs have a join and a meet.
    pub fn from_leq_fn(
        n: usize,
        labels: Vec<String>,
        leq: impl Fn(usize, usize) -> bool,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotALattice("empty order".into()));
        }
        if n > MAX_LATTICE {
            return Err(Error::TooLarge(n, MAX_LATTICE));
        }
        if labels.len() != n {
            return Err(Error::NotALattice(format!(
                "{} labels for {} elements",
                labels.len(),
                n
            )));
        }
        let mut m = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = leq(i, j);
            }
        }
        Self::from_matrix(n, labels, m)
    }

    /// Builds a lattice from generating pairs `i ≤ j`; the reflexive-transitive
    /// closure is taken first.
    pub fn from_pairs(n: usize, labels: Vec<String>, pairs: &[[usize; 2]]) -> Result<Self> {
        if n > MAX_LATTICE {
            return Err(Error::TooLarge(n, MAX_LATTICE));
        }
        let mut m = vec![false; n * n];
        for i in 0..n {
            m[i * n + i] = true;
        }
        for &[i, j] in pairs {
            if i >= n || j >= n {
                return Err(Error::UnknownElement(i.max(j).to_string()));
            }
            m[i * n + j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if m[i * n + k] {
                    for j in 0..n {
                        if m[k * n + j] {
                            m[i * n + j] = true;
                        }
                    }
                }
            }
        }
        let labels = if labels.is_empty() {
            (0..n).map(|i| i.to_string()).collect()
        } else {
            labels
        };
        Self::from_leq_fn(n, labels, |i, j| m[i * n + j])
    }

    fn from_matrix(n: usize, labels: Vec<String>, leq: Vec<bool>) -> Result<Self> {
        let le = |i: usize, j: usize| leq[i * n + j];
        for i in 0..n {
            if !le(i, i) {
                return Err(Error::NotALattice(format!("not reflexive at {i}")));
            }
            for j in 0..n {
                if i != j && le(i, j) && le(j, i) {
                    return Err(Error::NotALattice(format!("{i} and {j} are equivalent")));
                }
                if le(i, j) {
                    for k in 0..n {
                        if le(j, k) && !le(i, k) {
                            return Err(Error::NotALattice(format!(
                                "not transitive at {i} ≤ {j} ≤ {k}"
                            )));
                        }
                    }
                }
            }
        }
        let mut join = vec![0u8; n * n];
        let mut meet = vec![0u8; n * n];
        for i in 0..n {
            for j in i..n {
                let lub = (0..n)
                    .filter(|&k| le(i, k) && le(j, k))
                    .find(|&k| (0..n).all(|z| !(le(i, z) && le(j, z)) || le(k, z)));
                let glb = (0..n)
                    .filter(|&k| le(k, i) && le(k, j))
                    .find(|&k| (0..n).all(|z| !(le(z, i) && le(z, j)) || le(z, k)));
                let (Some(lub), Some(glb)) = (lub, glb) else {
                    return Err(Error::NotALattice(format!(
                        "`{}` and `{}` lack a join or a meet",
                        labels[i], labels[j]
                    )));
                };
                join[i * n + j] = lub as u8;
                join[j * n + i] = lub as u8;
                meet[i * n + j] = glb as u8;
                meet[j * n + i] = glb as u8;
            }
        }
        let bottom = (0..n).find(|&b| (0..n).all(|x| le(b, x))).expect("finite lattice has 0");
        let top = (0..n).find(|&t| (0..n).all(|x| le(x, t))).expect("finite lattice has 1");
        let mut lower = vec![Vec::new(); n];
        let mut upper = vec![Vec::new(); n];
        for i in 0..n {
            for j in 0..n {
                if i != j
                    && le(i, j)
                    && !(0..n).any(|z| z != i && z != j && le(i, z) && le(z, j))
                {
                    lower[j].push(i);
                    upper[i].push(j);
                }
            }
        }
        let is_ji: Vec<bool> = (0..n).map(|x| lower[x].len() == 1).collect();
        let ji = (0..n).filter(|&x| is_ji[x]).collect();
        Ok(FinLattice {
            n,
            labels,
            leq,
            join,
            meet,
            bottom,
            top,
            lower,
            upper,
            ji,
            is_ji,
        })
    }

    pub fn from_json(json: &LatticeJson) -> Result<Self> {
        Self::from_pairs(json.size, json.labels.clone(), &json.leq_pairs)
    }

    /// JSON with covering pairs as the generating relation.
    pub fn to_json(&self) -> LatticeJson {
        LatticeJson {
            size: self.n,
            leq_pairs: self.cover_pairs().into_iter().map(|(a, b)| [a, b]).collect(),
            labels: self.labels.clone(),
        }
    }

    /// The `n`-element chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::from_leq_fn(n, labels, |i, j| i <= j).expect("chain")
    }

    /// The diamond: `0`, three atoms `a b c`, `1`.
    pub fn m3() -> Self {
        let labels = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
        Self::from_pairs(5, labels, &[[0, 1], [0, 2], [0, 3], [1, 4], [2, 4], [3, 4]])
            .expect("M3")
    }

    /// The pentagon `0 < a < c < 1`, `0 < b < 1`.
    pub fn n5() -> Self {
        let labels = ["0", "a", "b", "c", "1"].map(String::from).to_vec();
        Self::from_pairs(5, labels, &[[0, 1], [1, 3], [3, 4], [0, 2], [2, 4]]).expect("N5")
    }

    /// The Boolean lattice of subsets of a `k`-set.
    pub fn boolean(k: usize) -> Self {
        let n = 1usize << k;
        let labels = (0..n).map(|i| format!("{i:0k$b}")).collect();
        Self::from_leq_fn(n, labels, |i, j| i & !j == 0).expect("Boolean lattice")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_trivial(&self) -> bool {
        self.n == 1
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Element given by label, or by decimal index when no label matches.
    pub fn resolve(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .or_else(|| name.parse().ok().filter(|&i: &usize| i < self.n))
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.n + y]
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.n + y] as usize
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.n + y] as usize
    }

    pub fn join_table(&self) -> &[u8] {
        &self.join
    }

    pub fn meet_table(&self) -> &[u8] {
        &self.meet
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn join_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.bottom, |a, b| self.join(a, b))
    }

    pub fn meet_all(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.top, |a, b| self.meet(a, b))
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    /// All covering pairs `(lower, upper)` sorted by lower then upper.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = (0..self.n)
            .flat_map(|x| self.upper[x].iter().map(move |&y| (x, y)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Join-irreducible elements in ascending index order.
    pub fn join_irreducibles(&self) -> &[usize] {
        &self.ji
    }

    pub fn is_join_irreducible(&self, x: usize) -> bool {
        self.is_ji[x]
    }

    /// The unique lower cover of a join-irreducible.
    pub fn lower_cover(&self, p: usize) -> Result<usize> {
        if self.is_ji[p] {
            Ok(self.lower[p][0])
        } else {
            Err(Error::NotJoinIrreducible(p))
        }
    }

    pub fn require_ji(&self, p: usize) -> Result<()> {
        if p < self.n && self.is_ji[p] {
            Ok(())
        } else {
            Err(Error::NotJoinIrreducible(p))
        }
    }

    /// Join-irreducibles below `x`.
    pub fn ji_below(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.ji.iter().copied().filter(move |&j| self.leq(j, x))
    }

    /// Length of the longest chain from the bottom to `x`.
    pub fn heights(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&x| (0..self.n).filter(|&y| self.leq(y, x)).count());
        let mut h = vec![0; self.n];
        for &x in &order {
            h[x] = self.lower[x].iter().map(|&y| h[y] + 1).max().unwrap_or(0);
        }
        h
    }

    pub fn structural_predicates(&self) -> StructuralPredicates {
        StructuralPredicates {
            distributive: self.is_distributive(),
            join_semidistributive: self.is_join_semidistributive(),
            dual_2_distributive: self.is_dual_2_distributive(),
        }
    }

    pub fn is_distributive(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| {
                    self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z))
                })
            })
        })
    }

    pub fn is_join_semidistributive(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| {
                    let xy = self.join(x, y);
                    xy != self.join(x, z) || xy == self.join(x, self.meet(y, z))
                })
            })
        })
    }

    /// `x ∧ (y0∨y1∨y2) = ⋁_{i<j} x ∧ (yi∨yj)` for all elements.
    pub fn is_dual_2_distributive(&self) -> bool {
        let n = self.n;
        (0..n).all(|x| {
            (0..n).all(|y0| {
                (0..n).all(|y1| {
                    let y01 = self.join(y0, y1);
                    let m01 = self.meet(x, y01);
                    (0..n).all(|y2| {
                        let lhs = self.meet(x, self.join(y01, y2));
                        let rhs = self.join(
                            m01,
                            self.join(
                                self.meet(x, self.join(y0, y2)),
                                self.meet(x, self.join(y1, y2)),
                            ),
                        );
                        lhs == rhs
                    })
                })
            })
        })
    }

    /// Checks the lattice axioms against the stored tables.
    pub fn check_axioms(&self) -> bool {
        let n = self.n;
        for x in 0..n {
            if self.join(x, x) != x || self.meet(x, x) != x {
                return false;
            }
            for y in 0..n {
                if self.join(x, y) != self.join(y, x) || self.meet(x, y) != self.meet(y, x) {
                    return false;
                }
                if self.join(x, self.meet(x, y)) != x || self.meet(x, self.join(x, y)) != x {
                    return false;
                }
                if self.leq(x, y) != (self.join(x, y) == y) || self.leq(x, y) != (self.meet(x, y) == x)
                {
                    return false;
                }
                for z in 0..n {
                    if self.join(x, self.join(y, z)) != self.join(self.join(x, y), z)
                        || self.meet(x, self.meet(y, z)) != self.meet(self.meet(x, y), z)
                    {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Same lattice with new labels.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Precondition(format!(
                "{} labels for {} elements",
                labels.len(),
                self.n
            )));
        }
        self.labels = labels;
        Ok(self)
    }
}
