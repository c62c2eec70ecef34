//! Lattice maps, products and backtracking homomorphism search.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::FinLattice;
use crate::error::{Error, Result};

/// A map between two lattices given by its value table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeMap {
    pub values: Vec<usize>,
}

impl LatticeMap {
    pub fn new(values: Vec<usize>) -> Self {
        LatticeMap { values }
    }

    pub fn identity(n: usize) -> Self {
        LatticeMap {
            values: (0..n).collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = self.values.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    pub fn is_surjective_onto(&self, target: &FinLattice) -> bool {
        let mut hit = vec![false; target.len()];
        for &v in &self.values {
            if v < target.len() {
                hit[v] = true;
            }
        }
        hit.into_iter().all(|h| h)
    }

    /// Preservation of join and meet on all pairs.
    pub fn is_homomorphism(&self, source: &FinLattice, target: &FinLattice) -> bool {
        let n = source.len();
        if self.values.len() != n || self.values.iter().any(|&v| v >= target.len()) {
            return false;
        }
        let h = &self.values;
        (0..n).all(|x| {
            (0..n).all(|y| {
                h[source.join(x, y)] == target.join(h[x], h[y])
                    && h[source.meet(x, y)] == target.meet(h[x], h[y])
            })
        })
    }

    pub fn is_embedding(&self, source: &FinLattice, target: &FinLattice) -> bool {
        self.is_homomorphism(source, target) && self.is_injective()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &LatticeMap) -> LatticeMap {
        LatticeMap {
            values: self.values.iter().map(|&x| other.values[x]).collect(),
        }
    }

    pub fn check_len(&self, source: &FinLattice, target: &FinLattice) -> Result<()> {
        if self.values.len() != source.len() || self.values.iter().any(|&v| v >= target.len()) {
            return Err(Error::Precondition(format!(
                "map with {} values does not fit a {}-element source and {}-element target",
                self.values.len(),
                source.len(),
                target.len()
            )));
        }
        Ok(())
    }
}

/// Componentwise product; element `(a, b)` has index `a * |L2| + b`.
pub fn direct_product(l1: &FinLattice, l2: &FinLattice) -> FinLattice {
    let n2 = l2.len();
    let n = l1.len() * n2;
    let labels = (0..n)
        .map(|i| format!("({},{})", l1.label(i / n2), l2.label(i % n2)))
        .collect();
    FinLattice::from_leq_fn(n, labels, |i, j| {
        l1.leq(i / n2, j / n2) && l2.leq(i % n2, j % n2)
    })
    .expect("product of lattices is a lattice")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomKind {
    Any,
    Injective,
    Surjective,
}

/// Search plan: images are chosen for the bottom and then for the
/// join-irreducibles of `k` in a linear extension; every other element is the
/// join of the images below it and becomes determined once all of them are.
struct Plan {
    slots: Vec<usize>,
    /// Elements that become determined right after slot `i` is assigned.
    ready: Vec<Vec<usize>>,
    /// For each element, the slots whose images it joins.
    support: Vec<Vec<usize>>,
}

fn plan(k: &FinLattice) -> Plan {
    let mut ji = k.join_irreducibles().to_vec();
    ji.sort_by_key(|&j| ((0..k.len()).filter(|&y| k.leq(y, j)).count(), j));
    let mut slots = vec![k.bottom()];
    slots.extend(ji);
    let mut ready = vec![Vec::new(); slots.len()];
    let mut support = vec![Vec::new(); k.len()];
    for x in 0..k.len() {
        let mut sup = vec![0];
        sup.extend(
            slots[1..]
                .iter()
                .enumerate()
                .filter(|&(_, &j)| k.leq(j, x))
                .map(|(i, _)| i + 1),
        );
        let last = *sup.iter().max().unwrap();
        ready[last].push(x);
        support[x] = sup;
    }
    Plan {
        slots,
        ready,
        support,
    }
}

/// Calls `visit` on every homomorphism `k → l` of the given kind, in
/// lexicographic order of the images of the bottom followed by the
/// join-irreducibles of `k` (sorted by down-set size, then index).
pub fn for_each_hom(
    k: &FinLattice,
    l: &FinLattice,
    kind: HomKind,
    mut visit: impl FnMut(&LatticeMap) -> ControlFlow<()>,
) {
    if kind == HomKind::Injective && k.len() > l.len() {
        return;
    }
    if kind == HomKind::Surjective && k.len() < l.len() {
        return;
    }
    let plan = plan(k);
    let mut slot_img = vec![usize::MAX; plan.slots.len()];
    let mut h = vec![usize::MAX; k.len()];
    let mut det: Vec<usize> = Vec::new();
    let mut used = vec![false; l.len()];
    let _ = search(
        k,
        l,
        kind,
        &plan,
        0,
        &mut slot_img,
        &mut h,
        &mut det,
        &mut used,
        &mut visit,
    );
}

#[allow(clippy::too_many_arguments)]
fn search(
    k: &FinLattice,
    l: &FinLattice,
    kind: HomKind,
    plan: &Plan,
    i: usize,
    slot_img: &mut Vec<usize>,
    h: &mut Vec<usize>,
    det: &mut Vec<usize>,
    used: &mut Vec<bool>,
    visit: &mut impl FnMut(&LatticeMap) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if i == plan.slots.len() {
        let map = LatticeMap { values: h.clone() };
        debug_assert!(map.is_homomorphism(k, l));
        if kind == HomKind::Surjective && !map.is_surjective_onto(l) {
            return ControlFlow::Continue(());
        }
        return visit(&map);
    }
    let slot = plan.slots[i];
    for v in 0..l.len() {
        if i == 0 && kind == HomKind::Surjective && v != l.bottom() {
            continue;
        }
        // monotone on the slots already placed
        if (0..i).any(|s| k.leq(plan.slots[s], slot) && !l.leq(slot_img[s], v)) {
            continue;
        }
        slot_img[i] = v;
        let mark = det.len();
        let mut ok = true;
        for &x in &plan.ready[i] {
            let hx = plan.support[x]
                .iter()
                .fold(l.bottom(), |acc, &s| l.join(acc, slot_img[s]));
            if kind == HomKind::Injective && used[hx] {
                ok = false;
                break;
            }
            if x == k.top() && kind == HomKind::Surjective && hx != l.top() {
                ok = false;
                break;
            }
            h[x] = hx;
            used[hx] = true;
            det.push(x);
            // operations among determined elements must be preserved
            for &y in det.iter() {
                let (j, m) = (k.join(x, y), k.meet(x, y));
                if (h[j] != usize::MAX && h[j] != l.join(hx, h[y]))
                    || (h[m] != usize::MAX && h[m] != l.meet(hx, h[y]))
                {
                    ok = false;
                    break;
                }
            }
            if !ok {
                break;
            }
        }
        // pairs whose join or meet just became determined
        if ok {
            'outer: for &x in &plan.ready[i] {
                if h[x] == usize::MAX {
                    continue;
                }
                for a in 0..det.len() {
                    for b in a..det.len() {
                        let (p, q) = (det[a], det[b]);
                        if k.join(p, q) == x && h[x] != l.join(h[p], h[q]) {
                            ok = false;
                            break 'outer;
                        }
                        if k.meet(p, q) == x && h[x] != l.meet(h[p], h[q]) {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
        }
        if ok {
            search(k, l, kind, plan, i + 1, slot_img, h, det, used, visit)?;
        }
        for &x in &det[mark..] {
            if h[x] != usize::MAX {
                // `used` is only consulted for injective search, where images
                // are distinct, so clearing is exact there
                used[h[x]] = false;
            }
            h[x] = usize::MAX;
        }
        det.truncate(mark);
        slot_img[i] = usize::MAX;
    }
    ControlFlow::Continue(())
}

/// The first injective homomorphism in search order, if any.
pub fn embedding_search(k: &FinLattice, l: &FinLattice) -> Option<LatticeMap> {
    let mut found = None;
    for_each_hom(k, l, HomKind::Injective, |m| {
        found = Some(m.clone());
        ControlFlow::Break(())
    });
    found
}

/// All surjective homomorphisms in search order, stopping after `limit`.
pub fn surjection_search(k: &FinLattice, l: &FinLattice, limit: usize) -> Vec<LatticeMap> {
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    for_each_hom(k, l, HomKind::Surjective, |m| {
        out.push(m.clone());
        if out.len() >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    out
}

/// Sorted multiset of (down-set size, up-set size, #lower covers, #upper covers).
fn invariant(l: &FinLattice) -> Vec<(usize, usize, usize, usize)> {
    let n = l.len();
    let mut v: Vec<_> = (0..n)
        .map(|x| {
            (
                (0..n).filter(|&y| l.leq(y, x)).count(),
                (0..n).filter(|&y| l.leq(x, y)).count(),
                l.lower_covers(x).len(),
                l.upper_covers(x).len(),
            )
        })
        .collect();
    v.sort_unstable();
    v
}

/// An isomorphism `k → l`, if one exists.
pub fn isomorphism(k: &FinLattice, l: &FinLattice) -> Option<LatticeMap> {
    if k.len() != l.len() || invariant(k) != invariant(l) {
        return None;
    }
    embedding_search(k, l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{co_lattice, Poset};

    fn co(n: usize) -> FinLattice {
        co_lattice(&Poset::chain(n)).unwrap().0
    }

    #[test]
    fn co2_embeds_into_co3() {
        let m = embedding_search(&co(2), &co(3)).unwrap();
        assert!(m.is_embedding(&co(2), &co(3)));
    }

    #[test]
    fn m3_does_not_embed_into_co5() {
        assert!(embedding_search(&FinLattice::m3(), &co(5)).is_none());
    }

    #[test]
    fn identity_is_found() {
        let l = FinLattice::n5();
        let m = embedding_search(&l, &l).unwrap();
        assert!(m.is_embedding(&l, &l));
        assert_eq!(isomorphism(&l, &l), Some(LatticeMap::identity(5)));
    }

    #[test]
    fn product_sizes_and_projection() {
        let p = direct_product(&co(3), &co(2));
        assert_eq!(p.len(), 28);
        let sq = direct_product(&co(3), &co(3));
        let proj = LatticeMap::new((0..49).map(|i| i / 7).collect());
        assert!(proj.is_homomorphism(&sq, &co(3)));
        assert!(proj.is_surjective_onto(&co(3)));
        let surj = surjection_search(&sq, &co(3), usize::MAX);
        assert!(surj.contains(&proj));
        assert!(surj.iter().all(|m| m.is_homomorphism(&sq, &co(3))));
    }

    #[test]
    fn no_surjection_onto_a_larger_lattice() {
        let s = surjection_search(&FinLattice::chain(2), &FinLattice::chain(3), 10);
        assert!(s.is_empty());
    }

    #[test]
    fn search_agrees_with_brute_force() {
        // every map from a 4-element lattice into a 5-element one
        let pairs = [
            (FinLattice::boolean(2), FinLattice::n5()),
            (FinLattice::chain(3), FinLattice::m3()),
            (FinLattice::chain(4), FinLattice::boolean(2)),
        ];
        for (k, l) in pairs {
            let mut brute = Vec::new();
            let total = l.len().pow(k.len() as u32);
            for mut code in 0..total {
                let mut vals = Vec::new();
                for _ in 0..k.len() {
                    vals.push(code % l.len());
                    code /= l.len();
                }
                let m = LatticeMap::new(vals);
                if m.is_homomorphism(&k, &l) {
                    brute.push(m);
                }
            }
            let mut found = Vec::new();
            for_each_hom(&k, &l, HomKind::Any, |m| {
                found.push(m.clone());
                ControlFlow::Continue(())
            });
            brute.sort_by(|a, b| a.values.cmp(&b.values));
            let mut sorted = found.clone();
            sorted.sort_by(|a, b| a.values.cmp(&b.values));
            sorted.dedup();
            assert_eq!(sorted.len(), found.len());
            assert_eq!(sorted, brute);
        }
    }
}
