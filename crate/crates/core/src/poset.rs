//! Finite posets, order-convex subsets and the lattice `Co(P)`.
//!
//! Elements are indexed densely `0..n` and subsets are stored as `u64`
//! bitmasks, so posets are limited to 64 elements. Labels are only used for
//! input and output.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::FinLattice;

pub const MAX_POSET: usize = 64;

/// A finite partially ordered set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    /// `up[i]` has bit `j` set iff `i ⊴ j`.
    up: Vec<u64>,
    /// `down[i]` has bit `j` set iff `j ⊴ i`.
    down: Vec<u64>,
}

/// An order-convex subset of some poset, as a bitmask over element indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConvexSet {
    pub members: u64,
}

impl ConvexSet {
    pub const EMPTY: ConvexSet = ConvexSet { members: 0 };

    pub fn contains(&self, i: usize) -> bool {
        i < 64 && self.members >> i & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.members.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.members == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        bits(self.members)
    }
}

/// Iterates the set bits of a mask in increasing order.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// JSON form: element labels plus (not necessarily minimal) covering pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    #[serde(default)]
    pub covers: Vec<[String; 2]>,
}

impl Poset {
    /// Builds a poset from strict relations `lo ⊴ hi`; the reflexive-transitive
    /// closure is taken and antisymmetry validated.
    pub fn from_relations(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if n > MAX_POSET {
            return Err(Error::TooLarge(n, MAX_POSET));
        }
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if seen.insert(l.as_str(), i).is_some() {
                return Err(Error::InvalidPoset(format!("duplicate label `{l}`")));
            }
        }
        let mut up: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for &(lo, hi) in pairs {
            if lo >= n || hi >= n {
                return Err(Error::UnknownElement(format!("{}", lo.max(hi))));
            }
            up[lo] |= 1 << hi;
        }
        // Warshall closure on bit rows.
        for k in 0..n {
            for i in 0..n {
                if up[i] >> k & 1 == 1 {
                    up[i] |= up[k];
                }
            }
        }
        for i in 0..n {
            for j in bits(up[i]) {
                if j != i && up[j] >> i & 1 == 1 {
                    return Err(Error::InvalidPoset(format!(
                        "cycle through `{}` and `{}`",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        let mut down = vec![0u64; n];
        for i in 0..n {
            for j in bits(up[i]) {
                down[j] |= 1 << i;
            }
        }
        Ok(Poset { labels, up, down })
    }

    pub fn from_json(json: &PosetJson) -> Result<Self> {
        let index: HashMap<&str, usize> = json
            .elements
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let lookup = |l: &String| {
            index
                .get(l.as_str())
                .copied()
                .ok_or_else(|| Error::UnknownElement(l.clone()))
        };
        let pairs = json
            .covers
            .iter()
            .map(|[a, b]| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Poset::from_relations(json.elements.clone(), &pairs)
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.labels.clone(),
            covers: self
                .cover_pairs()
                .into_iter()
                .map(|(a, b)| [self.labels[a].clone(), self.labels[b].clone()])
                .collect(),
        }
    }

    /// The chain `0 ⊴ 1 ⊴ … ⊴ n-1`.
    pub fn chain(n: usize) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::from_relations(labels, &pairs).expect("chain is a poset")
    }

    pub fn antichain(n: usize) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Poset::from_relations(labels, &[]).expect("antichain is a poset")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i] >> j & 1 == 1
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    pub fn up_set(&self, i: usize) -> u64 {
        self.up[i]
    }

    pub fn down_set(&self, i: usize) -> u64 {
        self.down[i]
    }

    pub fn all_mask(&self) -> u64 {
        mask_of_len(self.len())
    }

    /// Covering pairs `(lo, hi)` of the order, sorted.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in bits(self.up[i]) {
                if j == i {
                    continue;
                }
                let between = self.up[i] & self.down[j] & !(1 << i) & !(1 << j);
                if between == 0 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The same elements with the converse order.
    pub fn dual(&self) -> Poset {
        Poset {
            labels: self.labels.clone(),
            up: self.down.clone(),
            down: self.up.clone(),
        }
    }

    /// The sub-poset on `keep` (a mask), with the induced order; labels kept.
    pub fn induced(&self, keep: u64) -> Poset {
        let idx: Vec<usize> = bits(keep & self.all_mask()).collect();
        let labels = idx.iter().map(|&i| self.labels[i].clone()).collect();
        let mut pairs = Vec::new();
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                if i != j && self.leq(i, j) {
                    pairs.push((a, b));
                }
            }
        }
        Poset::from_relations(labels, &pairs).expect("induced order is a partial order")
    }

    pub fn mask_of(&self, subset: &[usize]) -> Result<u64> {
        let mut mask = 0u64;
        for &i in subset {
            if i >= self.len() {
                return Err(Error::UnknownElement(i.to_string()));
            }
            mask |= 1 << i;
        }
        Ok(mask)
    }

    /// Smallest convex superset of `mask`: every `z` lying between two members.
    pub fn hull_mask(&self, mask: u64) -> u64 {
        let mut above = 0u64;
        let mut below = 0u64;
        for i in bits(mask) {
            above |= self.up[i];
            below |= self.down[i];
        }
        let hull = above & below;
        debug_assert_eq!(hull, {
            let (mut a2, mut b2) = (0u64, 0u64);
            for i in bits(hull) {
                a2 |= self.up[i];
                b2 |= self.down[i];
            }
            a2 & b2
        });
        hull
    }

    pub fn is_convex_mask(&self, mask: u64) -> bool {
        self.hull_mask(mask) == mask
    }

    pub fn is_convex(&self, subset: &[usize]) -> Result<bool> {
        Ok(self.is_convex_mask(self.mask_of(subset)?))
    }

    pub fn convex_hull(&self, subset: &[usize]) -> Result<ConvexSet> {
        Ok(ConvexSet {
            members: self.hull_mask(self.mask_of(subset)?),
        })
    }

    /// All order-convex subsets, sorted by size and then by member list.
    pub fn convex_sets(&self) -> Vec<ConvexSet> {
        let n = self.len();
        let mut out = Vec::new();
        // Decide elements in index order; a branch is cut as soon as a decided
        // excluded element lies between two decided included ones.
        fn go(p: &Poset, k: usize, inc: u64, exc: u64, out: &mut Vec<ConvexSet>) {
            if k == p.len() {
                out.push(ConvexSet { members: inc });
                return;
            }
            let bit = 1u64 << k;
            // include k: no excluded z between k and an included x
            let blocked = bits(inc).any(|x| {
                let between = (p.up[x] & p.down[k]) | (p.up[k] & p.down[x]);
                between & exc != 0
            });
            if !blocked {
                go(p, k + 1, inc | bit, exc, out);
            }
            // exclude k: k not between two included elements
            let mut above = 0u64;
            let mut below = 0u64;
            for x in bits(inc) {
                above |= p.up[x];
                below |= p.down[x];
            }
            if above & below & bit == 0 {
                go(p, k + 1, inc, exc | bit, out);
            }
        }
        go(self, 0, 0, 0, &mut out);
        debug_assert!(n == 0 || out.iter().all(|s| self.is_convex_mask(s.members)));
        out.sort_by_key(|s| (s.len(), bits(s.members).collect::<Vec<_>>()));
        out
    }

    /// Label of a subset as `{a,b,...}` in index order.
    pub fn set_label(&self, mask: u64) -> String {
        let inner: Vec<&str> = bits(mask).map(|i| self.labels[i].as_str()).collect();
        format!("{{{}}}", inner.join(","))
    }

    /// Sorted label list of a subset.
    pub fn set_labels(&self, mask: u64) -> Vec<String> {
        bits(mask).map(|i| self.labels[i].clone()).collect()
    }
}

pub(crate) fn mask_of_len(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// The lattice of all order-convex subsets of `p`, ordered by inclusion.
///
/// Element 0 is the empty set and the returned family maps every lattice
/// element to its convex set. Meet is intersection and join is the convex
/// hull of the union.
pub fn co_lattice(p: &Poset) -> Result<(FinLattice, Vec<ConvexSet>)> {
    let sets = p.convex_sets();
    let lattice = lattice_of_sets(&sets, |m| p.set_label(m))?;
    Ok((lattice, sets))
}

/// Inclusion-ordered lattice on a family of sets that is closed under the
/// lattice operations it is meant to carry; labels come from `label`.
pub(crate) fn lattice_of_sets(
    sets: &[ConvexSet],
    label: impl Fn(u64) -> String,
) -> Result<FinLattice> {
    let n = sets.len();
    let labels = sets.iter().map(|s| label(s.members)).collect();
    FinLattice::from_leq_fn(n, labels, |i, j| sets[i].members & !sets[j].members == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> Poset {
        Poset::chain(3)
    }

    #[test]
    fn convexity_in_a_chain() {
        let p = chain3();
        assert!(!p.is_convex(&[0, 2]).unwrap());
        assert!(p.is_convex(&[0, 1]).unwrap());
        assert_eq!(p.convex_hull(&[0, 2]).unwrap().members, 0b111);
    }

    #[test]
    fn antichain_subsets_are_convex() {
        let p = Poset::antichain(2);
        for s in [&[][..], &[0], &[1], &[0, 1]] {
            assert!(p.is_convex(s).unwrap());
        }
        assert_eq!(p.convex_hull(&[0, 1]).unwrap().members, 0b11);
    }

    #[test]
    fn unknown_index_is_an_error() {
        assert!(matches!(chain3().is_convex(&[5]), Err(Error::UnknownElement(_))));
        assert!(chain3().convex_hull(&[3]).is_err());
    }

    #[test]
    fn co_lattice_sizes() {
        assert_eq!(co_lattice(&Poset::chain(3)).unwrap().0.len(), 7);
        assert_eq!(co_lattice(&Poset::chain(4)).unwrap().0.len(), 11);
        let (b, sets) = co_lattice(&Poset::antichain(2)).unwrap();
        assert_eq!(b.len(), 4);
        assert!(b.structural_predicates().distributive);
        assert_eq!(sets[0], ConvexSet::EMPTY);
    }

    #[test]
    fn co_lattice_bounds() {
        let p = Poset::chain(4);
        let (l, sets) = co_lattice(&p).unwrap();
        assert_eq!(sets[l.bottom()].members, 0);
        assert_eq!(sets[l.top()].members, p.all_mask());
        for x in 0..l.len() {
            for y in 0..l.len() {
                let j = sets[l.join(x, y)].members;
                assert_eq!(j, p.hull_mask(sets[x].members | sets[y].members));
                assert_eq!(sets[l.meet(x, y)].members, sets[x].members & sets[y].members);
            }
        }
    }

    #[test]
    fn dual_has_same_convex_sets() {
        let p = chain3();
        let d = p.dual();
        assert!(d.leq(2, 0) && !d.leq(0, 2));
        assert_eq!(p.convex_sets(), d.convex_sets());
        assert_eq!(d.dual(), p);
        assert_eq!(Poset::antichain(3).dual(), Poset::antichain(3));
    }

    #[test]
    fn cycles_are_rejected() {
        let labels = vec!["a".to_string(), "b".to_string()];
        assert!(Poset::from_relations(labels, &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn json_round_trip_keeps_order() {
        let json: PosetJson = serde_json::from_str(
            r#"{"elements": ["0","1","a"], "covers": [["0","1"],["1","a"]]}"#,
        )
        .unwrap();
        let p = Poset::from_json(&json).unwrap();
        assert!(p.leq(0, 2));
        let back = Poset::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn induced_subposet() {
        let p = Poset::chain(4);
        let q = p.induced(0b1011);
        assert_eq!(q.labels(), &["0", "1", "3"]);
        assert!(q.leq(1, 2));
        assert_eq!(q.cover_pairs(), vec![(0, 1), (1, 2)]);
    }
}
