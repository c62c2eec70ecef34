//! Membership in the variety generated by the lattices `Co(T)`, `T` a chain.
//!
//! For a join-irreducible `a` let `J_a = {a} ∪ rd(a)` and
//! `φ_a(x) = {b ∈ J_a : b ≤ x}`. A finite lattice is a member iff for every
//! `a` some total order of `J_a` turns `φ_a` into a lattice homomorphism into
//! the convex subsets of that chain. The maps then separate points, since
//! `a ∈ φ_a(x)` iff `a ≤ x`, so together they embed the lattice into a
//! product. [`brute_force_oracle`] decides the same question without using
//! the sets `J_a`.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dependency::DependencyData;
use crate::error::{Error, Result};
use crate::lattice::{for_each_hom, FinLattice, HomKind};
use crate::poset::{co_lattice, Poset};
use crate::term::{check_sigma, SigmaKind};

pub const ORACLE_MAX_SIZE: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainOrderWitness {
    pub anchor: usize,
    pub chain: Vec<usize>,
}

impl ChainOrderWitness {
    /// `φ(x)` as a bitmask over chain positions.
    pub fn image(&self, l: &FinLattice, x: usize) -> u64 {
        self.chain
            .iter()
            .enumerate()
            .filter(|&(_, &b)| l.leq(b, x))
            .fold(0, |m, (i, _)| m | 1 << i)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingCertificate {
    pub components: Vec<ChainOrderWitness>,
}

impl EmbeddingCertificate {
    pub fn total_size(&self) -> usize {
        self.components.iter().map(|c| c.chain.len()).sum()
    }

    pub fn to_json(&self, l: &FinLattice) -> Vec<ComponentJson> {
        self.components
            .iter()
            .map(|c| ComponentJson {
                anchor: l.label(c.anchor).to_string(),
                chain: c.chain.iter().map(|&b| l.label(b).to_string()).collect(),
                map: (0..l.len())
                    .map(|x| {
                        crate::poset::bits(c.image(l, x))
                            .map(|i| l.label(c.chain[i]).to_string())
                            .collect()
                    })
                    .collect(),
            })
            .collect()
    }

    /// Resolves labels; the `map` field is kept for verification.
    pub fn from_json(l: &FinLattice, json: &[ComponentJson]) -> Result<(Self, Vec<Vec<Vec<usize>>>)> {
        let mut comps = Vec::new();
        let mut maps = Vec::new();
        for c in json {
            let anchor = l.resolve(&c.anchor)?;
            let chain = c.chain.iter().map(|s| l.resolve(s)).collect::<Result<Vec<_>>>()?;
            let map = c
                .map
                .iter()
                .map(|set| set.iter().map(|s| l.resolve(s)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            comps.push(ChainOrderWitness { anchor, chain });
            maps.push(map);
        }
        Ok((EmbeddingCertificate { components: comps }, maps))
    }
}

/// One certificate component: `map[x]` lists `φ(x)` in chain order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub anchor: String,
    pub chain: Vec<String>,
    pub map: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub anchor: usize,
    /// First failing join-irreducible condition, if any.
    pub sigma: Option<(SigmaKind, Vec<usize>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Membership {
    Accepted(EmbeddingCertificate),
    Rejected(Rejection),
}

impl Membership {
    pub fn accepted(&self) -> bool {
        matches!(self, Membership::Accepted(_))
    }
}

/// Constraints on an order of `J_a`, over bit positions of `J_a`.
struct OrderProblem {
    m: usize,
    /// Distinct nonempty proper images, each of which must be an interval.
    sets: Vec<u64>,
    /// `(u, c)`: the hull of `u` must be exactly `c` (`u ⊊ c`).
    joins: Vec<(u64, u64)>,
}

impl OrderProblem {
    fn new(l: &FinLattice, elems: &[usize]) -> Result<Self> {
        let m = elems.len();
        let phi = |x: usize| {
            elems
                .iter()
                .enumerate()
                .filter(|&(_, &b)| l.leq(b, x))
                .fold(0u64, |s, (i, _)| s | 1 << i)
        };
        let images: Vec<u64> = (0..l.len()).map(phi).collect();
        let full = crate::poset::mask_of_len(m);
        let sets: BTreeSet<u64> = images
            .iter()
            .copied()
            .filter(|&s| s != 0 && s != full && s.count_ones() > 1)
            .collect();
        let mut joins = BTreeSet::new();
        for x in 0..l.len() {
            for y in x..l.len() {
                let u = images[x] | images[y];
                let c = images[l.join(x, y)];
                if c != u {
                    if u == 0 {
                        // φ(x ∨ y) nonempty while φ(x), φ(y) are empty
                        return Err(Error::Verification("empty join image".into()));
                    }
                    joins.insert((u, c));
                }
            }
        }
        Ok(OrderProblem {
            m,
            sets: sets.into_iter().collect(),
            joins: joins.into_iter().collect(),
        })
    }

    /// Can `c` be placed next, after the positions in `placed` with `last`
    /// placed most recently?
    fn allows(&self, placed: u64, last: Option<usize>, c: usize) -> bool {
        let bit = 1u64 << c;
        for &s in &self.sets {
            let started = s & placed != 0;
            if s & bit == 0 {
                if started && s & !placed != 0 {
                    return false;
                }
            } else if started && last.is_some_and(|p| s >> p & 1 == 0) {
                return false;
            }
        }
        for &(u, cset) in &self.joins {
            if cset & bit != 0 && u & bit == 0 && (u & placed == 0 || u & !placed == 0) {
                return false;
            }
        }
        true
    }

    fn valid(&self, order: &[usize]) -> bool {
        let mut placed = 0u64;
        let mut last = None;
        for &c in order {
            if placed >> c & 1 == 1 || !self.allows(placed, last, c) {
                return false;
            }
            placed |= 1 << c;
            last = Some(c);
        }
        order.len() == self.m
    }

    fn search(&self, order: &mut Vec<usize>, placed: u64) -> bool {
        if order.len() == self.m {
            return true;
        }
        for c in 0..self.m {
            if placed >> c & 1 == 0 && self.allows(placed, order.last().copied(), c) {
                order.push(c);
                if self.search(order, placed | 1 << c) {
                    return true;
                }
                order.pop();
            }
        }
        false
    }
}

/// Seed order: two-colour `rd(a)` by the pairs `{x, y}` with `a ≤ x ∨ y`,
/// then list one colour class, `a`, and the other class.
fn seed_order(l: &FinLattice, a: usize, rd: &[usize]) -> Option<Vec<usize>> {
    let k = rd.len();
    let mut colour: Vec<Option<bool>> = vec![None; k];
    for s in 0..k {
        if colour[s].is_some() {
            continue;
        }
        colour[s] = Some(false);
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            for j in 0..k {
                if i != j && l.leq(a, l.join(rd[i], rd[j])) {
                    let want = !colour[i].unwrap();
                    match colour[j] {
                        None => {
                            colour[j] = Some(want);
                            stack.push(j);
                        }
                        Some(c) if c != want => return None,
                        _ => {}
                    }
                }
            }
        }
    }
    let class = |c: bool| -> Vec<usize> {
        (0..k).filter(|&i| colour[i] == Some(c)).map(|i| rd[i]).collect()
    };
    let (mut left, mut right) = (class(false), class(true));
    // left: x before y when y ≤ a ∨ x; right: x before y when x ≤ a ∨ y
    let below_count = |x: usize, side: &[usize]| side.iter().filter(|&&y| l.leq(y, l.join(a, x))).count();
    let l_snapshot = left.clone();
    left.sort_by_key(|&x| (std::cmp::Reverse(below_count(x, &l_snapshot)), x));
    let r_snapshot = right.clone();
    right.sort_by_key(|&x| (below_count(x, &r_snapshot), x));
    let mut out = left;
    out.push(a);
    out.extend(right);
    Some(out)
}

/// A total order of `J_a` making `φ_a` a homomorphism, if there is one.
pub fn chain_order(l: &FinLattice, a: usize) -> Result<Option<ChainOrderWitness>> {
    l.require_ji(a)?;
    let dep = DependencyData::compute(l)?;
    chain_order_with(l, &dep, a)
}

pub fn chain_order_with(
    l: &FinLattice,
    dep: &DependencyData,
    a: usize,
) -> Result<Option<ChainOrderWitness>> {
    let elems = dep.j_a(a)?;
    if elems.len() > 64 {
        return Err(Error::TooLarge(elems.len(), 64));
    }
    let problem = match OrderProblem::new(l, &elems) {
        Ok(p) => p,
        Err(_) => return Ok(None),
    };
    let pos = |x: usize| elems.iter().position(|&e| e == x).unwrap();
    if let Some(seed) = seed_order(l, a, dep.rd(a)?) {
        let order: Vec<usize> = seed.iter().map(|&x| pos(x)).collect();
        if problem.valid(&order) {
            return Ok(Some(ChainOrderWitness { anchor: a, chain: seed }));
        }
    }
    let mut order = Vec::new();
    if problem.search(&mut order, 0) {
        let chain = order.into_iter().map(|i| elems[i]).collect();
        Ok(Some(ChainOrderWitness { anchor: a, chain }))
    } else {
        Ok(None)
    }
}

pub fn decide_sub_lo(l: &FinLattice) -> Result<Membership> {
    let dep = DependencyData::compute(l)?;
    let orders = l
        .join_irreducibles()
        .par_iter()
        .map(|&a| chain_order_with(l, &dep, a).map(|o| (a, o)))
        .collect::<Result<Vec<_>>>()?;
    if let Some(&(anchor, _)) = orders.iter().find(|(_, o)| o.is_none()) {
        let sigma = [SigmaKind::E, SigmaKind::P, SigmaKind::HS]
            .into_iter()
            .find_map(|k| match check_sigma(l, k) {
                crate::term::SigmaOutcome::Fails(w) => Some((k, w)),
                _ => None,
            });
        return Ok(Membership::Rejected(Rejection { anchor, sigma }));
    }
    let cert = EmbeddingCertificate {
        components: orders.into_iter().map(|(_, o)| o.unwrap()).collect(),
    };
    verify_certificate(l, &cert)
        .map_err(|e| Error::Integrity(format!("assembled certificate fails: {e}")))?;
    Ok(Membership::Accepted(cert))
}

/// Members whose chains all have at most `n` elements, so that the lattice
/// embeds into a power of `Co(n)`.
pub fn decide_sub_n(l: &FinLattice, n: usize) -> Result<bool> {
    match decide_sub_lo(l)? {
        Membership::Rejected(_) => Ok(false),
        Membership::Accepted(cert) => Ok(cert.components.iter().all(|c| c.chain.len() <= n)),
    }
}

/// Least `n` with [`decide_sub_n`] true, for a member.
pub fn least_n(cert: &EmbeddingCertificate) -> usize {
    cert.components.iter().map(|c| c.chain.len()).max().unwrap_or(0)
}

/// Checks every component map for convexity and preservation of both
/// operations, joint injectivity, that each chain lists exactly `J_a`, and
/// the bound `Σ|chain| ≤ |J|²`.
pub fn verify_certificate(l: &FinLattice, cert: &EmbeddingCertificate) -> Result<()> {
    let dep = DependencyData::compute(l)?;
    let fail = |msg: String| Err(Error::Verification(msg));
    let ji = l.join_irreducibles();
    let anchors: Vec<usize> = cert.components.iter().map(|c| c.anchor).collect();
    if anchors != ji {
        return fail("anchors must be the join-irreducibles in ascending order".into());
    }
    for c in &cert.components {
        let mut sorted = c.chain.clone();
        sorted.sort_unstable();
        if sorted != dep.j_a(c.anchor)? {
            return fail(format!("chain for `{}` is not J_a", l.label(c.anchor)));
        }
        let images: Vec<u64> = (0..l.len()).map(|x| c.image(l, x)).collect();
        let hull = |s: u64| -> u64 {
            if s == 0 {
                0
            } else {
                let lo = s.trailing_zeros();
                let hi = 63 - s.leading_zeros();
                crate::poset::mask_of_len(hi as usize + 1) & !crate::poset::mask_of_len(lo as usize)
            }
        };
        for x in 0..l.len() {
            if hull(images[x]) != images[x] {
                return fail(format!(
                    "image of `{}` under the `{}` component is not convex",
                    l.label(x),
                    l.label(c.anchor)
                ));
            }
            for y in 0..l.len() {
                if images[l.join(x, y)] != hull(images[x] | images[y])
                    || images[l.meet(x, y)] != images[x] & images[y]
                {
                    return fail(format!(
                        "`{}` component does not preserve the operations on `{}`, `{}`",
                        l.label(c.anchor),
                        l.label(x),
                        l.label(y)
                    ));
                }
            }
        }
    }
    let key = |x: usize| -> Vec<u64> { cert.components.iter().map(|c| c.image(l, x)).collect() };
    let keys: BTreeSet<Vec<u64>> = (0..l.len()).map(key).collect();
    if keys.len() != l.len() {
        return fail("product map is not injective".into());
    }
    if cert.total_size() > ji.len() * ji.len() {
        return fail(format!(
            "total chain size {} exceeds |J|² = {}",
            cert.total_size(),
            ji.len() * ji.len()
        ));
    }
    Ok(())
}

/// Verifies a certificate read from JSON, including its stored maps.
pub fn verify_certificate_json(l: &FinLattice, json: &[ComponentJson]) -> Result<()> {
    let (cert, maps) = EmbeddingCertificate::from_json(l, json)?;
    verify_certificate(l, &cert)?;
    for (c, map) in cert.components.iter().zip(&maps) {
        if map.len() != l.len() {
            return Err(Error::Verification("map must list every element".into()));
        }
        for (x, set) in map.iter().enumerate() {
            let expect: Vec<usize> = crate::poset::bits(c.image(l, x)).map(|i| c.chain[i]).collect();
            if *set != expect {
                return Err(Error::Verification(format!(
                    "stored image of `{}` disagrees with the chain",
                    l.label(x)
                )));
            }
        }
    }
    Ok(())
}

/// Decides membership by searching homomorphisms into `Co(k)`, `k = |J|`,
/// until every pair `p ≰ y` with `p` join-irreducible is separated by one.
pub fn brute_force_oracle(l: &FinLattice) -> Result<bool> {
    if l.len() > ORACLE_MAX_SIZE {
        return Err(Error::SizeGuard(format!(
            "oracle limited to {ORACLE_MAX_SIZE} elements, got {}",
            l.len()
        )));
    }
    let k = l.join_irreducibles().len();
    if k == 0 {
        return Ok(true);
    }
    let (target, sets) = co_lattice(&Poset::chain(k))?;
    let mut open: Vec<(usize, usize)> = l
        .join_irreducibles()
        .iter()
        .flat_map(|&p| (0..l.len()).filter(move |&y| !l.leq(p, y)).map(move |y| (p, y)))
        .collect();
    for_each_hom(l, &target, HomKind::Any, |h| {
        open.retain(|&(p, y)| {
            sets[h.apply(p)].members & !sets[h.apply(y)].members == 0
        });
        if open.is_empty() {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(open.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn co(n: usize) -> FinLattice {
        co_lattice(&Poset::chain(n)).unwrap().0
    }

    #[test]
    fn co3_middle_anchor() {
        let l = co(3);
        let a = l.index_of("{1}").unwrap();
        let w = chain_order(&l, a).unwrap().unwrap();
        let labels: Vec<&str> = w.chain.iter().map(|&x| l.label(x)).collect();
        assert!(labels == ["{0}", "{1}", "{2}"] || labels == ["{2}", "{1}", "{0}"]);
    }

    #[test]
    fn distributive_anchor_is_a_singleton_chain() {
        let l = FinLattice::boolean(3);
        for &a in l.join_irreducibles() {
            assert_eq!(chain_order(&l, a).unwrap().unwrap().chain, vec![a]);
        }
    }

    #[test]
    fn m3_atoms_have_no_order() {
        let l = FinLattice::m3();
        for &a in l.join_irreducibles() {
            assert!(chain_order(&l, a).unwrap().is_none());
        }
        assert!(!decide_sub_lo(&l).unwrap().accepted());
        assert!(chain_order(&l, 4).is_err());
    }

    #[test]
    fn pentagon_and_co4_are_members() {
        assert!(decide_sub_lo(&FinLattice::n5()).unwrap().accepted());
        let l = co(4);
        let Membership::Accepted(cert) = decide_sub_lo(&l).unwrap() else {
            panic!()
        };
        assert!(cert.total_size() <= 16);
        verify_certificate(&l, &cert).unwrap();
        verify_certificate_json(&l, &cert.to_json(&l)).unwrap();
    }

    #[test]
    fn swapped_chain_is_rejected() {
        let l = co(4);
        let Membership::Accepted(mut cert) = decide_sub_lo(&l).unwrap() else {
            panic!()
        };
        let c = cert.components.iter_mut().find(|c| c.chain.len() >= 3).unwrap();
        c.chain.swap(0, 1);
        assert!(verify_certificate(&l, &cert).is_err());
    }

    #[test]
    fn sub_n_levels() {
        assert!(decide_sub_n(&co(3), 3).unwrap());
        assert!(!decide_sub_n(&co(3), 2).unwrap());
        assert!(decide_sub_n(&FinLattice::boolean(2), 2).unwrap());
        assert!(decide_sub_n(&FinLattice::n5(), 3).unwrap());
        assert!(!decide_sub_n(&FinLattice::n5(), 2).unwrap());
        assert!(decide_sub_n(&FinLattice::chain(1), 0).unwrap());
    }

    #[test]
    fn oracle_examples() {
        assert!(!brute_force_oracle(&FinLattice::m3()).unwrap());
        assert!(brute_force_oracle(&FinLattice::n5()).unwrap());
        assert!(brute_force_oracle(&co(4)).is_err());
    }
}
