//! Λ-configurations, the homomorphisms they induce, and sections of
//! surjections onto `Co(n)` and `L_{m,n}`.

use serde::{Deserialize, Serialize};

use crate::catalog::{co_chain_with_sets, l_mn_with_sets};
use crate::error::{Error, Result};
use crate::lattice::{FinLattice, LatticeMap};
use crate::poset::ConvexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LambdaKind {
    /// Generators `x_0..x_{n-1}`, domain `Co(n)`.
    Plain(usize),
    /// Generators `x_0..x_{m+n}`, domain `L_{m,n}`.
    Split(usize, usize),
}

impl LambdaKind {
    pub fn arity(self) -> usize {
        match self {
            LambdaKind::Plain(n) => n,
            LambdaKind::Split(m, n) => m + n + 1,
        }
    }

    /// The unordered pair whose meet is not constrained.
    fn exempt(self) -> Option<(usize, usize)> {
        match self {
            LambdaKind::Plain(_) => None,
            LambdaKind::Split(m, _) => Some((m - 1, m)),
        }
    }

    fn counts_pair(self, i: usize, j: usize) -> bool {
        i != j && self.exempt().is_none_or(|(p, q)| (i.min(j), i.max(j)) != (p, q))
    }

    fn check(self) -> Result<()> {
        match self {
            LambdaKind::Plain(0) => Err(Error::Precondition("Λ_n needs n ≥ 1".into())),
            LambdaKind::Split(m, n) if m == 0 || n == 0 => {
                Err(Error::Precondition("Λ_{m,n} needs m, n ≥ 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// Domain lattice with its elements as subsets of the underlying chain.
    pub fn domain(self) -> Result<(FinLattice, Vec<ConvexSet>)> {
        self.check()?;
        match self {
            LambdaKind::Plain(n) => co_chain_with_sets(n),
            LambdaKind::Split(m, n) => l_mn_with_sets(m, n),
        }
    }

    /// Domain elements standing for the generators.
    pub fn generator_elements(self, domain: &FinLattice) -> Result<Vec<usize>> {
        let single = |i: usize| domain.resolve(&format!("{{{i}}}"));
        match self {
            LambdaKind::Plain(n) => (0..n).map(single).collect(),
            LambdaKind::Split(m, n) => (0..=m + n)
                .map(|i| {
                    if i == m {
                        domain.resolve(&format!("{{{},{}}}", m - 1, m))
                    } else {
                        single(i)
                    }
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaConfig {
    pub kind: LambdaKind,
    pub generators: Vec<usize>,
    /// Image of the empty set.
    pub base: usize,
}

impl LambdaConfig {
    /// Takes the base from the generators: `x_0 ∧ x_1` for `Λ_n`,
    /// `x_0 ∧ x_2` for `Λ_{m,n}`. `Λ_1` has no such meet; build it with
    /// [`LambdaConfig::with_base`].
    pub fn new(l: &FinLattice, kind: LambdaKind, generators: Vec<usize>) -> Result<Self> {
        kind.check()?;
        if generators.len() != kind.arity() {
            return Err(Error::Precondition(format!(
                "{kind:?} takes {} generators, got {}",
                kind.arity(),
                generators.len()
            )));
        }
        if let Some(&g) = generators.iter().find(|&&g| g >= l.len()) {
            return Err(Error::UnknownElement(g.to_string()));
        }
        let base = match kind {
            LambdaKind::Plain(1) => {
                return Err(Error::Precondition("Λ_1 needs an explicit base".into()))
            }
            LambdaKind::Plain(_) => l.meet(generators[0], generators[1]),
            LambdaKind::Split(..) => l.meet(generators[0], generators[2]),
        };
        Ok(LambdaConfig { kind, generators, base })
    }

    pub fn with_base(kind: LambdaKind, generators: Vec<usize>, base: usize) -> Self {
        LambdaConfig { kind, generators, base }
    }
}

fn betweenness_holds(l: &FinLattice, a: &[usize]) -> bool {
    let n = a.len();
    (0..n).all(|i| {
        (i + 2..n).all(|j| (i + 1..j).all(|k| l.leq(a[k], l.join(a[i], a[j]))))
    })
}

pub fn lambda_holds(l: &FinLattice, cfg: &LambdaConfig) -> Result<bool> {
    let kind = cfg.kind;
    kind.check()?;
    let a = &cfg.generators;
    if a.len() != kind.arity() {
        return Err(Error::Precondition(format!(
            "{kind:?} takes {} generators, got {}",
            kind.arity(),
            a.len()
        )));
    }
    if !betweenness_holds(l, a) {
        return Ok(false);
    }
    if let Some((p, q)) = kind.exempt() {
        if !l.leq(a[p], a[q]) {
            return Ok(false);
        }
    }
    if a.len() == 1 {
        return Ok(l.leq(cfg.base, a[0]));
    }
    for i in 0..a.len() {
        for j in 0..a.len() {
            if kind.counts_pair(i, j) && l.meet(a[i], a[j]) != cfg.base {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `φ(X) = ⋁_{i ∈ X} a_i`, the empty join read as the base. The result is
/// verified to be a homomorphism sending the generators where they belong.
pub fn hom_from_lambda(l: &FinLattice, cfg: &LambdaConfig) -> Result<LatticeMap> {
    if !lambda_holds(l, cfg)? {
        return Err(Error::Precondition("Λ does not hold for these generators".into()));
    }
    let (domain, sets) = cfg.kind.domain()?;
    let values = sets
        .iter()
        .map(|s| s.iter().fold(cfg.base, |acc, i| l.join(acc, cfg.generators[i])))
        .collect();
    let phi = LatticeMap::new(values);
    if !phi.is_homomorphism(&domain, l) {
        return Err(Error::Verification(
            "the induced map is not a homomorphism; the target is not a member".into(),
        ));
    }
    for (g, &a) in cfg.kind.generator_elements(&domain)?.iter().zip(&cfg.generators) {
        if phi.apply(*g) != a {
            return Err(Error::Verification("generator not preserved".into()));
        }
    }
    Ok(phi)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Retraction {
    pub section: LatticeMap,
    pub iterations: usize,
    pub generators: Vec<usize>,
}

/// `β(x) = min π⁻¹{x}`: the meet of each preimage class.
pub fn least_preimages(lp: &FinLattice, pi: &LatticeMap, t: &FinLattice) -> Result<Vec<usize>> {
    pi.check_len(lp, t)?;
    let mut beta: Vec<Option<usize>> = vec![None; t.len()];
    for x in 0..lp.len() {
        let y = pi.apply(x);
        beta[y] = Some(beta[y].map_or(x, |b| lp.meet(b, x)));
    }
    beta.into_iter()
        .enumerate()
        .map(|(y, b)| {
            b.ok_or_else(|| Error::Precondition(format!("`{}` has no preimage", t.label(y))))
        })
        .collect()
}

/// A homomorphism `φ: T → Lp` with `π ∘ φ = id`, where `T` is `Co(n)` or
/// `L_{m,n}` as given by `target`.
pub fn retract_section(lp: &FinLattice, pi: &LatticeMap, target: LambdaKind) -> Result<Retraction> {
    let (t, _) = target.domain()?;
    pi.check_len(lp, &t)?;
    if !pi.is_homomorphism(lp, &t) {
        return Err(Error::Precondition("π is not a homomorphism".into()));
    }
    if !pi.is_surjective_onto(&t) {
        return Err(Error::Precondition("π is not surjective".into()));
    }
    let beta = least_preimages(lp, pi, &t)?;
    let gens = target.generator_elements(&t)?;
    let mut a: Vec<usize> = gens.iter().map(|&g| beta[g]).collect();
    let k = a.len();
    let mut iterations = 0;
    loop {
        if !betweenness_holds(lp, &a) {
            return Err(Error::Integrity(format!("betweenness lost at iteration {iterations}")));
        }
        let mut b = lp.bottom();
        for i in 0..k {
            for j in i + 1..k {
                if target.counts_pair(i, j) {
                    b = lp.join(b, lp.meet(a[i], a[j]));
                }
            }
        }
        let next: Vec<usize> = a.iter().map(|&x| lp.join(x, b)).collect();
        if next == a {
            break;
        }
        a = next;
        iterations += 1;
        if iterations > lp.len() {
            return Err(Error::Precondition(format!(
                "no fixpoint after {} iterations; generators {:?}",
                lp.len(),
                a
            )));
        }
    }
    let cfg = match target {
        LambdaKind::Plain(1) => LambdaConfig::with_base(target, a.clone(), beta[t.bottom()]),
        _ => LambdaConfig::new(lp, target, a.clone())?,
    };
    let section = hom_from_lambda(lp, &cfg)?;
    if section.then(pi) != LatticeMap::identity(t.len()) {
        return Err(Error::Verification("π ∘ φ is not the identity".into()));
    }
    Ok(Retraction {
        section,
        iterations,
        generators: a,
    })
}
