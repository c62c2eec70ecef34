//! Named members: `Co(n)` for the `n`-element chain and
//! `L_{m,n} = {X ∈ Co(m+n+1) : m ∈ X ⇒ m-1 ∈ X}`, together with
//! classification of finite subdirectly irreducible members.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{embedding_search, isomorphism, monolith, FinLattice, LatticeMap};
use crate::membership::{decide_sub_lo, least_n, Membership};
use crate::poset::{co_lattice, lattice_of_sets, ConvexSet, Poset};
use crate::tracks::{WeakBiTrack, WeakTrack};

pub fn co_chain_with_sets(n: usize) -> Result<(FinLattice, Vec<ConvexSet>)> {
    co_lattice(&Poset::chain(n))
}

/// `Co(n)` with elements labelled `{}`, `{0}`, `{0,1}`, ...
///
/// # Panics
/// If `n > 21`, beyond the supported lattice size.
pub fn co_chain(n: usize) -> FinLattice {
    co_chain_with_sets(n).expect("Co(n) too large").0
}

pub fn l_mn_with_sets(m: usize, n: usize) -> Result<(FinLattice, Vec<ConvexSet>)> {
    if m == 0 || n == 0 {
        return Err(Error::Precondition("L_{m,n} needs m, n ≥ 1".into()));
    }
    let chain = Poset::chain(m + n + 1);
    let sets: Vec<ConvexSet> = chain
        .convex_sets()
        .into_iter()
        .filter(|s| !s.contains(m) || s.contains(m - 1))
        .collect();
    let lattice = lattice_of_sets(&sets, |mask| chain.set_label(mask))?;
    Ok((lattice, sets))
}

/// # Panics
/// If `m` or `n` is zero, or the lattice is too large.
pub fn l_mn(m: usize, n: usize) -> FinLattice {
    l_mn_with_sets(m, n).expect("invalid L_{m,n}").0
}

/// The element `c_m = {m-1, m}` of `L_{m,n}`.
pub fn c_m(l: &FinLattice, m: usize) -> Result<usize> {
    l.resolve(&format!("{{{},{}}}", m - 1, m))
}

/// `σ₀ = (c_m, {m-1}, .., {0}; {m+n})`, `τ₀ = (c_m, {m+1}, .., {m+n}; {0})`,
/// as indices into [`l_mn`]`(m, n)`.
pub fn canonical_bitrack(m: usize, n: usize) -> WeakBiTrack {
    let l = l_mn(m, n);
    let single = |i: usize| l.resolve(&format!("{{{i}}}")).expect("singleton");
    let c = c_m(&l, m).expect("c_m");
    let mut xs = vec![c];
    xs.extend((0..m).rev().map(single));
    let mut ys = vec![c];
    ys.extend((m + 1..=m + n).map(single));
    WeakBiTrack {
        sigma: WeakTrack {
            entries: xs,
            side: single(m + n),
        },
        tau: WeakTrack {
            entries: ys,
            side: single(0),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SIClass {
    /// `iso` maps `Co(n)` onto the input.
    CoChain { n: usize, iso: LatticeMap },
    Lmn { m: usize, n: usize, iso: LatticeMap },
    NotSI,
    NotMember,
}

impl SIClass {
    pub fn tag(&self) -> String {
        match self {
            SIClass::CoChain { n, .. } => format!("CoChain({n})"),
            SIClass::Lmn { m, n, .. } => format!("Lmn({m},{n})"),
            SIClass::NotSI => "NotSI".into(),
            SIClass::NotMember => "NotMember".into(),
        }
    }
}

pub fn is_subdirectly_irreducible(l: &FinLattice) -> Result<bool> {
    if l.is_trivial() {
        return Ok(false);
    }
    Ok(monolith(l)?.is_some())
}

pub fn classify_si(l: &FinLattice) -> Result<SIClass> {
    if !decide_sub_lo(l)?.accepted() {
        return Ok(SIClass::NotMember);
    }
    if !is_subdirectly_irreducible(l)? {
        return Ok(SIClass::NotSI);
    }
    let k = l.join_irreducibles().len();
    let mut candidates = vec![(0, k)];
    candidates.extend((1..k.saturating_sub(1)).map(|m| (m, k - 1 - m)));
    let found = candidates.par_iter().find_map_first(|&(m, n)| {
        let t = if m == 0 {
            co_chain_with_sets(n).ok()?.0
        } else {
            l_mn_with_sets(m, n).ok()?.0
        };
        let iso = isomorphism(&t, l)?;
        Some(if m == 0 {
            SIClass::CoChain { n, iso }
        } else {
            SIClass::Lmn { m, n, iso }
        })
    });
    found.ok_or_else(|| {
        Error::Integrity("subdirectly irreducible member matches no catalog lattice".into())
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VarietyPosition {
    pub least_n: usize,
    /// Catalog lattices found as sublattices; a diagnostic only, not the
    /// full list of subdirectly irreducible members of the generated variety.
    pub embedded_si_diagnostic: Vec<String>,
}

/// Largest catalog index tried by [`variety_position`].
pub const POSITION_CATALOG_LIMIT: usize = 6;

pub fn variety_position(l: &FinLattice) -> Result<VarietyPosition> {
    let cert = match decide_sub_lo(l)? {
        Membership::Accepted(c) => c,
        Membership::Rejected(_) => {
            return Err(Error::Precondition("lattice is not a member".into()))
        }
    };
    let n = least_n(&cert);
    let mut candidates: Vec<(String, FinLattice)> = Vec::new();
    for k in 1..=n.min(POSITION_CATALOG_LIMIT) {
        let co = co_chain(k);
        if is_subdirectly_irreducible(&co)? {
            candidates.push((format!("Co({k})"), co));
        }
    }
    for s in 2..n.min(POSITION_CATALOG_LIMIT) {
        for m in 1..s {
            candidates.push((format!("L({m},{})", s - m), l_mn(m, s - m)));
        }
    }
    let embedded = candidates
        .par_iter()
        .filter(|(_, t)| t.len() <= l.len() && embedding_search(t, l).is_some())
        .map(|(name, _)| name.clone())
        .collect();
    Ok(VarietyPosition {
        least_n: n,
        embedded_si_diagnostic: embedded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::principal_congruence;

    #[test]
    fn sizes() {
        assert_eq!(l_mn(1, 1).len(), 5);
        assert_eq!(l_mn(1, 2).len(), 8);
        assert_eq!(co_chain(4).len(), 11);
        assert!(isomorphism(&l_mn(1, 1), &FinLattice::n5()).is_some());
        let n5 = l_mn(1, 1);
        let labels: Vec<&str> = n5.labels().iter().map(String::as_str).collect();
        assert_eq!(labels, ["{}", "{0}", "{2}", "{0,1}", "{0,1,2}"]);
    }

    #[test]
    fn join_irreducibles_of_lmn() {
        for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)] {
            let l = l_mn(m, n);
            let mut expect: Vec<String> = (0..=m + n).filter(|&i| i != m).map(|i| format!("{{{i}}}")).collect();
            expect.push(format!("{{{},{}}}", m - 1, m));
            expect.sort();
            let mut got: Vec<String> = l.join_irreducibles().iter().map(|&j| l.label(j).to_string()).collect();
            got.sort();
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn lmn_monolith() {
        let l = l_mn(2, 1);
        let mono = monolith(&l).unwrap().unwrap();
        let c = c_m(&l, 2).unwrap();
        let one = l.resolve("{1}").unwrap();
        assert_eq!(mono, principal_congruence(&l, one, c));
    }

    #[test]
    fn canonical_small_cases() {
        let l = l_mn(1, 1);
        let t = canonical_bitrack(1, 1);
        let labels = |xs: &[usize]| xs.iter().map(|&x| l.label(x).to_string()).collect::<Vec<_>>();
        assert_eq!(labels(&t.sigma.entries), ["{0,1}", "{0}"]);
        assert_eq!(labels(&t.tau.entries), ["{0,1}", "{2}"]);
        let l = l_mn(2, 1);
        let t = canonical_bitrack(2, 1);
        assert_eq!(
            t.sigma.entries.iter().map(|&x| l.label(x)).collect::<Vec<_>>(),
            ["{1,2}", "{1}", "{0}"]
        );
        assert_eq!(l.label(t.sigma.side), "{3}");
    }

    #[test]
    fn classification() {
        assert_eq!(classify_si(&FinLattice::n5()).unwrap().tag(), "Lmn(1,1)");
        assert_eq!(classify_si(&FinLattice::boolean(2)).unwrap(), SIClass::NotSI);
        assert_eq!(classify_si(&FinLattice::m3()).unwrap(), SIClass::NotMember);
        assert_eq!(classify_si(&co_chain(3)).unwrap().tag(), "CoChain(3)");
        assert_eq!(classify_si(&FinLattice::chain(2)).unwrap().tag(), "CoChain(1)");
    }

    #[test]
    fn positions() {
        assert_eq!(variety_position(&l_mn(1, 2)).unwrap().least_n, 4);
        let p = variety_position(&co_chain(4)).unwrap();
        assert_eq!(p.least_n, 4);
        assert!(p.embedded_si_diagnostic.contains(&"Co(3)".to_string()));
        assert_eq!(variety_position(&FinLattice::boolean(2)).unwrap().least_n, 1);
        assert!(variety_position(&FinLattice::m3()).is_err());
    }
}
