//! A pair of posets `P ⊂ Q`, `P = Q ∖ {c}`, such that `Co(Q)` satisfies
//! the identity `STAR` while `Co(P)` does not.
//!
//! The posets live on the points `0, 1, 2, 3, a, b, c`. The search fixes
//! `0 < 1 < 2 < 3`, `1 < b`, `a < 2`, `1 < c < 2`, `1 ∥ a`, `2 ∥ b`, and tries
//! every consistent choice for the remaining comparabilities.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::FinLattice;
use crate::poset::{co_lattice, Poset, PosetJson};
use crate::term::builtin::identity_star;
use crate::term::eval::evaluate;
use crate::term::{check_with, CheckOptions, CheckOutcome, Identity};

pub const POINTS: [&str; 7] = ["0", "1", "2", "3", "a", "b", "c"];
const REMOVED: usize = 6;

const FORCED: [(usize, usize); 8] = [(0, 1), (1, 2), (2, 3), (1, 5), (4, 2), (1, 6), (6, 2), (0, 2)];
const INCOMPARABLE: [(usize, usize); 2] = [(1, 4), (2, 5)];

pub fn star_identity() -> Identity {
    identity_star()
}

fn exhaustive() -> CheckOptions {
    CheckOptions {
        force: true,
        ..CheckOptions::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationWitness {
    pub q: PosetJson,
    pub removed: String,
    pub p: PosetJson,
    pub q_satisfies: bool,
    pub p_satisfies: bool,
    /// Values of `x0, x1, x2, x3, xa, xb` in `Co(P)` falsifying the identity.
    pub p_failing_assignment: Vec<String>,
    pub p_failing_lhs: String,
    pub p_failing_rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLog {
    pub completions: usize,
    pub p_failures: usize,
    pub witnesses: Vec<SeparationWitness>,
}

/// Every strict order on the seven points containing the forced relations
/// and keeping the forced incomparabilities, in a fixed order.
pub fn completions() -> Vec<Poset> {
    let n = POINTS.len();
    let forced = closure(n, &FORCED);
    let free: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !forced[i][j] && !forced[j][i] && !INCOMPARABLE.contains(&(i, j)))
        .collect();
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let total = 3usize.pow(free.len() as u32);
    for code in 0..total {
        let mut rel: Vec<(usize, usize)> = FORCED.to_vec();
        let mut c = code;
        for &(i, j) in &free {
            match c % 3 {
                1 => rel.push((i, j)),
                2 => rel.push((j, i)),
                _ => {}
            }
            c /= 3;
        }
        let lt = closure(n, &rel);
        let consistent = (0..n).all(|i| !lt[i][i])
            && INCOMPARABLE.iter().all(|&(i, j)| !lt[i][j] && !lt[j][i])
            && free.iter().zip(choices(code, free.len())).all(|(&(i, j), ch)| match ch {
                0 => !lt[i][j] && !lt[j][i],
                1 => lt[i][j],
                _ => lt[j][i],
            });
        if !consistent || !seen.insert(lt.clone()) {
            continue;
        }
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| lt[i][j])
            .collect();
        let labels = POINTS.iter().map(|s| s.to_string()).collect();
        out.push(Poset::from_relations(labels, &pairs).expect("acyclic"));
    }
    out
}

fn choices(mut code: usize, k: usize) -> Vec<usize> {
    (0..k)
        .map(|_| {
            let c = code % 3;
            code /= 3;
            c
        })
        .collect()
}

fn closure(n: usize, rel: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut lt = vec![vec![false; n]; n];
    for &(i, j) in rel {
        lt[i][j] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if lt[i][k] {
                for j in 0..n {
                    if lt[k][j] {
                        lt[i][j] = true;
                    }
                }
            }
        }
    }
    lt
}

/// `Co(P)` element for each singleton `{x0}, {x1}, {x2}, {x3}, {xa}, {xb}`.
fn singleton_assignment(p: &Poset, l: &FinLattice) -> Result<Vec<usize>> {
    ["0", "1", "2", "3", "a", "b"]
        .iter()
        .map(|s| l.resolve(&format!("{{{s}}}")))
        .collect::<Result<Vec<_>>>()
        .map_err(|_| Error::Precondition(format!("poset lacks a point among 0,1,2,3,a,b: {:?}", p.labels())))
}

/// Value of both sides of the identity under the all-singletons assignment.
pub fn singleton_sides(p: &Poset) -> Result<(String, String)> {
    let (l, _) = co_lattice(p)?;
    let assignment = singleton_assignment(p, &l)?;
    let (lhs, rhs) = evaluate(&l, &star_identity(), &assignment)?;
    Ok((l.label(lhs).to_string(), l.label(rhs).to_string()))
}

fn star_outcome(p: &Poset) -> Result<(FinLattice, CheckOutcome)> {
    let (l, _) = co_lattice(p)?;
    let outcome = check_with(&l, &star_identity(), &exhaustive())?;
    Ok((l, outcome))
}

pub fn search_pq() -> Result<SearchLog> {
    let qs = completions();
    let keep = (1u64 << REMOVED) - 1;
    let results = qs
        .par_iter()
        .map(|q| -> Result<Option<(bool, Option<SeparationWitness>)>> {
            let p = q.induced(keep);
            let (lp, outcome) = star_outcome(&p)?;
            let CheckOutcome::Fails(w) = outcome else {
                return Ok(None);
            };
            let (_, q_outcome) = star_outcome(q)?;
            if !q_outcome.holds() {
                return Ok(Some((true, None)));
            }
            Ok(Some((
                true,
                Some(SeparationWitness {
                    q: q.to_json(),
                    removed: POINTS[REMOVED].to_string(),
                    p: p.to_json(),
                    q_satisfies: true,
                    p_satisfies: false,
                    p_failing_assignment: w.assignment.iter().map(|&x| lp.label(x).to_string()).collect(),
                    p_failing_lhs: lp.label(w.lhs).to_string(),
                    p_failing_rhs: lp.label(w.rhs).to_string(),
                }),
            )))
        })
        .collect::<Result<Vec<_>>>()?;
    let p_failures = results.iter().filter(|r| r.is_some()).count();
    let witnesses: Vec<SeparationWitness> = results.into_iter().flatten().filter_map(|(_, w)| w).collect();
    if witnesses.is_empty() {
        return Err(Error::Integrity("no separating pair found among the completions".into()));
    }
    Ok(SearchLog {
        completions: qs.len(),
        p_failures,
        witnesses,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationReport {
    pub p_satisfies: bool,
    pub q_satisfies: bool,
    /// `Co(Q)` satisfies the identity and `Co(P)` does not. `Co(P)` is then
    /// outside the variety generated by `Co(Q)`; that consequence is not
    /// computed separately.
    pub separated: bool,
    pub p_witness: Option<Vec<String>>,
    pub q_witness: Option<Vec<String>>,
}

/// Checks that `p` is an induced subposet of `q` (matching labels).
pub fn is_induced_subposet(p: &Poset, q: &Poset) -> bool {
    let idx: Option<Vec<usize>> = p.labels().iter().map(|s| q.index_of(s)).collect();
    let Some(idx) = idx else { return false };
    (0..p.len()).all(|i| (0..p.len()).all(|j| p.leq(i, j) == q.leq(idx[i], idx[j])))
}

pub fn verify_separation(p: &Poset, q: &Poset) -> Result<SeparationReport> {
    if !is_induced_subposet(p, q) {
        return Err(Error::Precondition("P is not an induced subposet of Q".into()));
    }
    let describe = |l: &FinLattice, o: &CheckOutcome| {
        o.witness()
            .map(|w| w.assignment.iter().map(|&x| l.label(x).to_string()).collect())
    };
    let (lp, op) = star_outcome(p)?;
    let (lq, oq) = star_outcome(q)?;
    Ok(SeparationReport {
        p_satisfies: op.holds(),
        q_satisfies: oq.holds(),
        separated: !op.holds() && oq.holds(),
        p_witness: describe(&lp, &op),
        q_witness: describe(&lq, &oq),
    })
}

/// The pair shipped with the crate, as found by [`search_pq`].
pub fn fixture() -> Result<(Poset, Poset)> {
    let q: PosetJson = serde_json::from_str(FIXTURE_Q)?;
    let p: PosetJson = serde_json::from_str(FIXTURE_P)?;
    Ok((Poset::from_json(&p)?, Poset::from_json(&q)?))
}

pub const FIXTURE_Q: &str = include_str!("../fixtures/star_q.json");
pub const FIXTURE_P: &str = include_str!("../fixtures/star_p.json");
