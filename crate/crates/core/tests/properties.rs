use std::ops::ControlFlow;
use std::sync::OnceLock;

use proptest::prelude::*;
use sublo::catalog::{co_chain, l_mn};
use sublo::corpus::lattices_up_to;
use sublo::dependency::{min_covers, DependencyData};
use sublo::lattice::{all_congruences, for_each_hom, monolith, principal_congruence, HomKind};
use sublo::membership::decide_sub_lo;
use sublo::projectivity::{hom_from_lambda, LambdaConfig, LambdaKind};
use sublo::term::Term;
use sublo::tracks::weak_tracks;
use sublo::{co_lattice, FinLattice, Poset};

fn corpus() -> &'static [FinLattice] {
    static C: OnceLock<Vec<FinLattice>> = OnceLock::new();
    C.get_or_init(|| lattices_up_to(7).unwrap())
}

fn random_poset() -> impl Strategy<Value = Poset> {
    (1usize..=8).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let labels = (0..n).map(|i| format!("p{i}")).collect();
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| bits[i * n + j])
                .collect();
            Poset::from_relations(labels, &pairs).unwrap()
        })
    })
}

fn random_term(depth: u32) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just("x"), Just("y"), Just("z")].prop_map(Term::var);
    leaf.prop_recursive(depth, 24, 3, |inner| {
        prop_oneof![
            proptest::collection::vec(inner.clone(), 2..4).prop_map(Term::join),
            proptest::collection::vec(inner, 2..4).prop_map(Term::meet),
        ]
    })
}

proptest! {
    #[test]
    fn hull_is_the_least_convex_superset(p in random_poset(), raw in any::<u64>()) {
        let s = raw & p.all_mask();
        let h = p.hull_mask(s);
        prop_assert!(p.is_convex_mask(h));
        prop_assert_eq!(h & s, s);
        for c in p.convex_sets() {
            if c.members & s == s {
                prop_assert_eq!(h & c.members, h);
            }
        }
    }

    #[test]
    fn co_join_is_hull_of_union(p in random_poset()) {
        let (l, sets) = co_lattice(&p).unwrap();
        for x in 0..l.len() {
            for y in 0..l.len() {
                prop_assert_eq!(sets[l.join(x, y)].members, p.hull_mask(sets[x].members | sets[y].members));
                prop_assert_eq!(sets[l.meet(x, y)].members, sets[x].members & sets[y].members);
            }
        }
    }

    #[test]
    fn terms_are_monotone(t in random_term(4), which in 0usize..1000, raw in proptest::collection::vec(0usize..64, 6)) {
        let l = &corpus()[which % corpus().len()];
        let n = l.len();
        let hi: Vec<usize> = raw[..3].iter().map(|v| v % n).collect();
        let lo: Vec<usize> = (0..3).map(|i| l.meet(hi[i], raw[3 + i] % n)).collect();
        let val = |v: &[usize]| {
            let v = v.to_vec();
            move |name: &str| v[["x", "y", "z"].iter().position(|s| *s == name).unwrap()]
        };
        prop_assert!(l.leq(t.eval(l, &val(&lo)), t.eval(l, &val(&hi))));
    }
}

fn interval(mask: u64) -> (u32, u32) {
    (mask.trailing_zeros(), 63 - mask.leading_zeros())
}

/// Nonempty sets in order, strictly increasing or strictly decreasing.
fn monotone_intervals(sets: &[u64]) -> bool {
    let ne: Vec<(u32, u32)> = sets.iter().filter(|&&s| s != 0).map(|&s| interval(s)).collect();
    let up = ne.windows(2).all(|w| w[0].1 < w[1].0);
    let down = ne.windows(2).all(|w| w[1].1 < w[0].0);
    up || down
}

#[test]
fn disjoint_betweenness_families_are_ordered() {
    for t in 1..=6 {
        let (l, sets) = co_lattice(&Poset::chain(t)).unwrap();
        let m = |i: usize| sets[i].members;
        for n in 1..=4 {
            let mut tuple = vec![0usize; n];
            let total = l.len().pow(n as u32);
            for code in 0..total {
                let mut c = code;
                for slot in tuple.iter_mut() {
                    *slot = c % l.len();
                    c /= l.len();
                }
                let disjoint = (0..n).all(|i| (i + 1..n).all(|j| m(tuple[i]) & m(tuple[j]) == 0));
                let between = (0..n).all(|i| {
                    (i + 2..n).all(|j| (i + 1..j).all(|k| l.leq(tuple[k], l.join(tuple[i], tuple[j]))))
                });
                if disjoint && between {
                    let family: Vec<u64> = tuple.iter().map(|&x| m(x)).collect();
                    assert!(monotone_intervals(&family), "T = {t}: {family:?}");
                }
            }
        }
    }
}

/// `X ⊴w Y` in the chain order (`rev` reads the chain backwards).
fn weakly_below(x: u64, y: u64, rev: bool) -> bool {
    let ((xl, xh), (yl, yh)) = (interval(x), interval(y));
    if rev {
        xl >= yl
    } else {
        xh <= yh
    }
}

fn strictly_below(x: u64, y: u64, rev: bool) -> bool {
    if rev {
        interval(y).1 < interval(x).0
    } else {
        interval(x).1 < interval(y).0
    }
}

#[test]
fn weak_tracks_in_chains_are_ordered() {
    for t in 1..=7 {
        let (l, sets) = co_lattice(&Poset::chain(t)).unwrap();
        let m = |i: usize| sets[i].members;
        for n in 1..=3 {
            for tr in weak_tracks(&l, n) {
                let xs: Vec<u64> = tr.entries.iter().map(|&e| m(e)).collect();
                let side = m(tr.side);
                assert!(xs.iter().all(|&s| s != 0) && side != 0);
                let holds = |rev: bool| {
                    weakly_below(side, xs[0], rev)
                        && weakly_below(xs[0], xs[1], rev)
                        && strictly_below(side, xs[1], rev)
                        && xs[1..].windows(2).all(|w| strictly_below(w[0], w[1], rev))
                };
                assert!(holds(false) || holds(true), "T = {t}, track {tr:?}");
            }
        }
    }
}

#[test]
fn monolith_matches_congruence_enumeration() {
    let mut ls: Vec<FinLattice> = lattices_up_to(8).unwrap();
    ls.extend([co_chain(4), l_mn(1, 2), l_mn(2, 1), l_mn(1, 3), l_mn(2, 2), l_mn(3, 1)]);
    for l in ls.iter().filter(|l| l.len() >= 2 && l.len() <= 12) {
        let cons = all_congruences(l);
        let nontrivial: Vec<_> = cons.iter().filter(|c| !c.is_identity()).collect();
        let atoms: Vec<_> = nontrivial
            .iter()
            .filter(|c| nontrivial.iter().all(|d| !d.finer_than(c) || d == *c))
            .collect();
        let mono = monolith(l).unwrap();
        assert_eq!(mono.is_some(), atoms.len() == 1);
        if let Some(m) = mono {
            assert_eq!(&m, *atoms[0]);
        }
        for a in 0..l.len() {
            for b in 0..l.len() {
                let theta = principal_congruence(l, a, b);
                let least = cons.iter().filter(|c| c.same(a, b)).find(|c| theta.finer_than(c) && c.finer_than(&theta));
                assert!(least.is_some());
                assert!(cons.iter().filter(|c| c.same(a, b)).all(|c| theta.finer_than(c)));
            }
        }
    }
}

/// Pairs `{x, y}` with `p ≤ x ∨ y` nontrivially, where neither side can be
/// lowered to any smaller element.
fn brute_force_min_pairs(l: &FinLattice, p: usize) -> Vec<[usize; 2]> {
    let covers = |x: usize, y: usize| l.leq(p, l.join(x, y)) && !l.leq(p, x) && !l.leq(p, y);
    let mut out = Vec::new();
    for x in 0..l.len() {
        for y in x + 1..l.len() {
            if covers(x, y)
                && (0..l.len()).all(|x2| !l.lt(x2, x) || !l.leq(p, l.join(x2, y)))
                && (0..l.len()).all(|y2| !l.lt(y2, y) || !l.leq(p, l.join(x, y2)))
            {
                out.push([x, y]);
            }
        }
    }
    out
}

#[test]
fn binary_min_covers_match_brute_force_on_members() {
    let mut ls = lattices_up_to(8).unwrap();
    ls.extend([co_chain(4), l_mn(1, 2), l_mn(2, 1)]);
    for l in &ls {
        if !decide_sub_lo(l).unwrap().accepted() {
            continue;
        }
        for &p in l.join_irreducibles() {
            let mut two: Vec<[usize; 2]> = min_covers(l, p)
                .unwrap()
                .covers
                .iter()
                .filter(|e| e.len() == 2)
                .map(|e| [e[0].min(e[1]), e[0].max(e[1])])
                .collect();
            two.sort();
            let all_pairs = min_covers(l, p).unwrap().covers.iter().all(|e| e.len() == 2);
            assert!(all_pairs, "member with a minimal cover of size ≠ 2");
            assert_eq!(two, brute_force_min_pairs(l, p));
        }
    }
}

#[test]
fn chain_lattices_have_j_a_of_size_n() {
    // Co(2) is the distributive square
    for n in 1..=6 {
        let l = co_chain(n);
        let expect = if n == 2 { 1 } else { n };
        assert_eq!(DependencyData::compute(&l).unwrap().max_j_a(), expect);
    }
}

/// Every homomorphism from `Co(n)` or `L_{m,n}` is the one induced by its
/// generator images.
#[test]
fn lambda_homomorphisms_are_unique() {
    let targets = [co_chain(3), co_chain(4), l_mn(1, 1), l_mn(1, 2), l_mn(2, 1)];
    let kinds = [LambdaKind::Plain(2), LambdaKind::Plain(3), LambdaKind::Split(1, 1), LambdaKind::Split(1, 2)];
    for kind in kinds {
        let (domain, _) = kind.domain().unwrap();
        let gens = kind.generator_elements(&domain).unwrap();
        for target in &targets {
            let mut count = 0;
            for_each_hom(&domain, target, HomKind::Any, |h| {
                let images: Vec<usize> = gens.iter().map(|&g| h.apply(g)).collect();
                let cfg = LambdaConfig::new(target, kind, images).unwrap();
                assert_eq!(&hom_from_lambda(target, &cfg).unwrap(), h);
                count += 1;
                ControlFlow::Continue(())
            });
            assert!(count > 0);
        }
    }
}
