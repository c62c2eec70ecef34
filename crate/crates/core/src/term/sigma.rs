//! Join-irreducible readings of `E`, `P` and `HS`, quantified over `J(L)`.
//!
//! Pair covers use the binary notions from [`crate::dependency`]. Failures
//! report the first tuple in ascending element order, with components in the
//! variable order of the corresponding identity.

use serde::Serialize;

use crate::dependency::{minimal_in, minimal_pair, nontrivial_cover};
use crate::error::{Error, Result};
use crate::lattice::FinLattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SigmaKind {
    E,
    P,
    HS,
}

impl SigmaKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "E" => Ok(SigmaKind::E),
            "P" => Ok(SigmaKind::P),
            "HS" => Ok(SigmaKind::HS),
            _ => Err(Error::UnknownIdentity(s.to_string())),
        }
    }

    pub fn vars(self) -> &'static [&'static str] {
        match self {
            SigmaKind::E => &["x", "a", "b0", "b1", "b2"],
            SigmaKind::P => &["a", "b", "c", "d", "b0", "b1"],
            SigmaKind::HS => &["a", "b", "c", "b0", "b1"],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SigmaOutcome {
    Holds,
    Fails(Vec<usize>),
}

impl SigmaOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, SigmaOutcome::Holds)
    }
}

pub fn check_sigma(l: &FinLattice, which: SigmaKind) -> SigmaOutcome {
    let w = match which {
        SigmaKind::E => e_sigma(l),
        SigmaKind::P => p_sigma(l),
        SigmaKind::HS => hs_sigma(l),
    };
    w.map_or(SigmaOutcome::Holds, SigmaOutcome::Fails)
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn e_sigma(l: &FinLattice) -> Option<Vec<usize>> {
    let ji = l.join_irreducibles();
    let le = |p, q| l.leq(p, q);
    for &x in ji {
        for &a in ji {
            let bs: Vec<usize> = ji
                .iter()
                .copied()
                .filter(|&b| minimal_pair(l, x, a, b))
                .collect();
            for &b0 in &bs {
                for &b1 in &bs {
                    for &b2 in &bs {
                        let b = [b0, b1, b2];
                        let ok = PERMUTATIONS.iter().any(|s| {
                            let (p, q, r) = (b[s[0]], b[s[1]], b[s[2]]);
                            let xq = l.join(x, q);
                            le(p, xq) && le(xq, l.join(x, r)) && le(q, l.join(p, r))
                        });
                        if !ok {
                            return Some(vec![x, a, b0, b1, b2]);
                        }
                    }
                }
            }
        }
    }
    None
}

fn p_sigma(l: &FinLattice) -> Option<Vec<usize>> {
    let ji = l.join_irreducibles();
    let le = |p, q| l.leq(p, q);
    for &a in ji {
        for &b in ji {
            for &c in ji {
                if !minimal_pair(l, a, b, c) {
                    continue;
                }
                for &d in ji {
                    if !minimal_pair(l, a, c, d) || le(b, l.join(a, d)) {
                        continue;
                    }
                    for &b0 in ji {
                        for &b1 in ji {
                            if !le(b, l.join(b0, b1)) {
                                continue;
                            }
                            let ok = [b0, b1].iter().any(|&bi| {
                                le(a, l.join(bi, c)) && le(b, l.join(a, bi)) && le(b, l.join(bi, d))
                            });
                            if !ok {
                                return Some(vec![a, b, c, d, b0, b1]);
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

fn hs_sigma(l: &FinLattice) -> Option<Vec<usize>> {
    let ji = l.join_irreducibles();
    let le = |p, q| l.leq(p, q);
    for &a in ji {
        for &b in ji {
            if a == b {
                continue;
            }
            for &c in ji {
                if !minimal_in(l, a, b, c) {
                    continue;
                }
                for &b0 in ji {
                    for &b1 in ji {
                        if !nontrivial_cover(l, b, b0, b1) {
                            continue;
                        }
                        let bs = [b0, b1];
                        let ok = (0..2).any(|i| {
                            let (bi, bo) = (bs[i], bs[1 - i]);
                            le(b, l.join(a, bi))
                                && ((le(a, l.join(bi, c)) && le(a, l.join(b, bo)))
                                    || (le(a, l.join(b0, c)) && le(a, l.join(b1, c))))
                        });
                        if !ok {
                            return Some(vec![a, b, c, b0, b1]);
                        }
                    }
                }
            }
        }
    }
    None
}
