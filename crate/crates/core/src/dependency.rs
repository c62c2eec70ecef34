//! Minimal nontrivial join-covers and the join-dependency relation.
//!
//! A join-cover `E` of `p` is refined by `G` (`G ≪ E`) when every member of
//! `G` lies below a member of `E`; `E` is minimal when every nontrivial cover
//! refining it contains it. It suffices to range over antichains of
//! join-irreducibles, which is what the enumeration does.
//!
//! For a pair, `p ≤ x ∨ y` is minimal in `x` when `p ≰ x_* ∨ y`, where `x_*`
//! is the unique lower cover of the join-irreducible `x`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::FinLattice;

/// Above this many candidate join-irreducibles the antichain enumeration
/// refuses to run.
pub const MAX_COVER_CANDIDATES: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinCoverSet {
    pub owner: usize,
    /// Sorted antichains, each sorted ascending.
    pub covers: Vec<Vec<usize>>,
}

/// All antichains of join-irreducibles that are nontrivial join-covers of `p`.
fn antichain_covers(l: &FinLattice, p: usize) -> Result<Vec<Vec<usize>>> {
    let cand: Vec<usize> = l
        .join_irreducibles()
        .iter()
        .copied()
        .filter(|&j| !l.leq(p, j))
        .collect();
    if cand.len() > MAX_COVER_CANDIDATES {
        return Err(Error::SizeGuard(format!(
            "{} candidate join-irreducibles for element {p}",
            cand.len()
        )));
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(
        l: &FinLattice,
        p: usize,
        cand: &[usize],
        k: usize,
        cur: &mut Vec<usize>,
        join: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == cand.len() {
            if cur.len() >= 2 && l.leq(p, join) {
                out.push(cur.clone());
            }
            return;
        }
        go(l, p, cand, k + 1, cur, join, out);
        let c = cand[k];
        if cur.iter().all(|&e| !l.leq(e, c) && !l.leq(c, e)) {
            cur.push(c);
            go(l, p, cand, k + 1, cur, l.join(join, c), out);
            cur.pop();
        }
    }
    go(l, p, &cand, 0, &mut cur, l.bottom(), &mut out);
    Ok(out)
}

fn refines(l: &FinLattice, g: &[usize], e: &[usize]) -> bool {
    g.iter().all(|&x| e.iter().any(|&y| l.leq(x, y)))
}

/// Refinement-minimal nontrivial join-covers of the join-irreducible `p`.
pub fn min_covers(l: &FinLattice, p: usize) -> Result<MinCoverSet> {
    l.require_ji(p)?;
    let all = antichain_covers(l, p)?;
    let mut covers: Vec<Vec<usize>> = all
        .iter()
        .filter(|e| {
            all.iter()
                .all(|g| !refines(l, g, e) || e.iter().all(|x| g.contains(x)))
        })
        .cloned()
        .collect();
    covers.sort();
    Ok(MinCoverSet { owner: p, covers })
}

/// `p ≤ x ∨ y` holds and is minimal in `x`.
pub fn minimal_in(l: &FinLattice, p: usize, x: usize, y: usize) -> bool {
    l.leq(p, l.join(x, y))
        && l.is_join_irreducible(x)
        && !l.leq(p, l.join(l.lower_covers(x)[0], y))
}

/// `p ≤ x ∨ y` is a nontrivial join-cover.
pub fn nontrivial_cover(l: &FinLattice, p: usize, x: usize, y: usize) -> bool {
    l.leq(p, l.join(x, y)) && !l.leq(p, x) && !l.leq(p, y)
}

/// `p ≤ x ∨ y` is nontrivial and minimal in both `x` and `y`.
pub fn minimal_pair(l: &FinLattice, p: usize, x: usize, y: usize) -> bool {
    nontrivial_cover(l, p, x, y) && minimal_in(l, p, x, y) && minimal_in(l, p, y, x)
}

/// Unordered minimal pairs `{x, y}` (with `x < y` as indices) covering `p`.
pub fn binary_min_covers(l: &FinLattice, p: usize) -> Result<Vec<[usize; 2]>> {
    l.require_ji(p)?;
    let ji = l.join_irreducibles();
    let mut out = Vec::new();
    for (i, &x) in ji.iter().enumerate() {
        for &y in &ji[i + 1..] {
            if minimal_pair(l, p, x, y) {
                out.push([x, y]);
            }
        }
    }
    Ok(out)
}

/// Minimal covers, `D` and the sets `rd(a)` for every join-irreducible.
#[derive(Clone, Debug, Serialize)]
pub struct DependencyData {
    pub ji: Vec<usize>,
    pub covers: Vec<MinCoverSet>,
    /// `rd[i]` belongs to `ji[i]`, sorted.
    pub rd: Vec<Vec<usize>>,
    #[serde(skip)]
    pos: Vec<Option<usize>>,
}

impl DependencyData {
    pub fn compute(l: &FinLattice) -> Result<Self> {
        let ji = l.join_irreducibles().to_vec();
        let mut pos = vec![None; l.len()];
        for (i, &j) in ji.iter().enumerate() {
            pos[j] = Some(i);
        }
        let covers = ji
            .iter()
            .map(|&p| min_covers(l, p))
            .collect::<Result<Vec<_>>>()?;
        let rd = covers
            .iter()
            .map(|c| {
                let mut r: Vec<usize> = c.covers.iter().flatten().copied().collect();
                r.sort_unstable();
                r.dedup();
                r
            })
            .collect();
        Ok(DependencyData {
            ji,
            covers,
            rd,
            pos,
        })
    }

    fn index(&self, a: usize) -> Result<usize> {
        self.pos
            .get(a)
            .copied()
            .flatten()
            .ok_or(Error::NotJoinIrreducible(a))
    }

    pub fn rd(&self, a: usize) -> Result<&[usize]> {
        Ok(&self.rd[self.index(a)?])
    }

    /// `{a} ∪ rd(a)`, sorted.
    pub fn j_a(&self, a: usize) -> Result<Vec<usize>> {
        let mut v = self.rd(a)?.to_vec();
        v.push(a);
        v.sort_unstable();
        v.dedup();
        Ok(v)
    }

    pub fn covers_of(&self, a: usize) -> Result<&MinCoverSet> {
        Ok(&self.covers[self.index(a)?])
    }

    /// `a D b`.
    pub fn d(&self, a: usize, b: usize) -> bool {
        self.rd(a).map(|r| r.binary_search(&b).is_ok()).unwrap_or(false)
    }

    pub fn max_j_a(&self) -> usize {
        self.rd.iter().map(|r| r.len() + 1).max().unwrap_or(0)
    }
}

pub fn rd(l: &FinLattice, a: usize) -> Result<Vec<usize>> {
    let mut r: Vec<usize> = min_covers(l, a)?.covers.into_iter().flatten().collect();
    r.sort_unstable();
    r.dedup();
    Ok(r)
}

pub fn j_a(l: &FinLattice, a: usize) -> Result<Vec<usize>> {
    let mut r = rd(l, a)?;
    r.push(a);
    r.sort_unstable();
    r.dedup();
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantResult {
    pub name: String,
    /// False when the hypotheses of the property are not met by the lattice;
    /// the check still runs and is reported.
    pub applicable: bool,
    pub holds: bool,
    /// Element labels of the first violation found.
    pub witness: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub results: Vec<InvariantResult>,
}

impl InvariantReport {
    pub fn all_hold(&self) -> bool {
        self.results.iter().all(|r| r.holds)
    }

    pub fn get(&self, name: &str) -> Option<&InvariantResult> {
        self.results.iter().find(|r| r.name == name)
    }
}

fn first<I: IntoIterator<Item = Vec<usize>>>(l: &FinLattice, it: I) -> Option<Vec<String>> {
    it.into_iter()
        .next()
        .map(|v| v.into_iter().map(|x| l.label(x).to_string()).collect())
}

/// Evaluates the dependency properties expected of members of the variety:
///
/// * `d_transitivity`: `a D b D c`, `a ≠ c` ⇒ `a D c`;
/// * `rd_antichain`: each `rd(p)` is an antichain;
/// * `min_ub`: `x, y ∈ rd(p)`, `p ≤ x ∨ y` ⇒ the pair is minimal in both;
/// * `min2st`: `x, y, u ∈ rd(a)`, `x ≠ y`, `a ≤ u∨x`, `a ≤ u∨y`,
///   `x ≤ a∨y` ⇒ `x ≤ u∨y` is a minimal nontrivial join-cover;
/// * `ivp`: for `a, x ∈ J` and distinct `b0, b1, b2 ∈ J` with every
///   `x ≤ a ∨ bi` minimal nontrivial, `a∨b0 ≤ a∨b1 ≤ a∨b2` forces strict
///   inequalities and `b1 ≤ b0 ∨ b2`. Applicable to join-semidistributive
///   lattices (the identity hypothesis is left to the caller).
///
/// Witness tuples are listed in the variable order above.
pub fn check_dependency_invariants(l: &FinLattice) -> Result<InvariantReport> {
    let dep_data = DependencyData::compute(l)?;
    let dep = &dep_data;
    let ji = &dep.ji;
    let mut results = Vec::new();

    let trans = ji.iter().flat_map(|&a| {
        dep.rd(a).unwrap().iter().flat_map(move |&b| {
            dep.rd(b)
                .unwrap()
                .iter()
                .filter(move |&&c| c != a && !dep.d(a, c))
                .map(move |&c| vec![a, b, c])
        })
    });
    let w = first(l, trans);
    results.push(InvariantResult {
        name: "d_transitivity".into(),
        applicable: true,
        holds: w.is_none(),
        witness: w,
    });

    let anti = ji.iter().flat_map(|&p| {
        let r = dep.rd(p).unwrap();
        r.iter().flat_map(move |&x| {
            r.iter()
                .filter(move |&&y| x != y && l.leq(x, y))
                .map(move |&y| vec![p, x, y])
        })
    });
    let w = first(l, anti);
    results.push(InvariantResult {
        name: "rd_antichain".into(),
        applicable: true,
        holds: w.is_none(),
        witness: w,
    });

    let minub = ji.iter().flat_map(|&p| {
        let r = dep.rd(p).unwrap();
        r.iter().flat_map(move |&x| {
            r.iter()
                .filter(move |&&y| {
                    l.leq(p, l.join(x, y)) && !(minimal_in(l, p, x, y) && minimal_in(l, p, y, x))
                })
                .map(move |&y| vec![p, x, y])
        })
    });
    let w = first(l, minub);
    results.push(InvariantResult {
        name: "min_ub".into(),
        applicable: true,
        holds: w.is_none(),
        witness: w,
    });

    let mut min2st = Vec::new();
    'outer: for &a in ji {
        let r = dep.rd(a)?;
        for &x in r {
            for &y in r {
                if x == y || !l.leq(x, l.join(a, y)) {
                    continue;
                }
                for &u in r {
                    if l.leq(a, l.join(u, x))
                        && l.leq(a, l.join(u, y))
                        && !minimal_pair(l, x, u, y)
                    {
                        min2st.push(vec![x, y, u, a]);
                        break 'outer;
                    }
                }
            }
        }
    }
    let w = first(l, min2st);
    results.push(InvariantResult {
        name: "min2st".into(),
        applicable: true,
        holds: w.is_none(),
        witness: w,
    });

    let jsd = l.is_join_semidistributive();
    let w = first(l, ivp_violations(l).into_iter().take(1));
    results.push(InvariantResult {
        name: "ivp".into(),
        applicable: jsd,
        holds: w.is_none(),
        witness: w,
    });

    Ok(InvariantReport { results })
}

/// Tuples `(a, x, b0, b1, b2)` violating the interval property.
pub fn ivp_violations(l: &FinLattice) -> Vec<Vec<usize>> {
    let ji = l.join_irreducibles();
    let mut out = Vec::new();
    for &a in ji {
        for &x in ji {
            let bs: Vec<usize> = ji
                .iter()
                .copied()
                .filter(|&b| minimal_pair(l, x, a, b))
                .collect();
            for &b0 in &bs {
                for &b1 in &bs {
                    for &b2 in &bs {
                        if b0 == b1 || b1 == b2 || b0 == b2 {
                            continue;
                        }
                        let (j0, j1, j2) = (l.join(a, b0), l.join(a, b1), l.join(a, b2));
                        if l.leq(j0, j1) && l.leq(j1, j2) {
                            let strict = j0 != j1 && j1 != j2;
                            if !strict || !l.leq(b1, l.join(b0, b2)) {
                                out.push(vec![a, x, b0, b1, b2]);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}
