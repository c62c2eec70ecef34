//! Weak tracks and weak bi-tracks.
//!
//! A weak track of length `n` is `(x_0..x_n; x)` with
//! 1. `x_0 ≠ (x_0 ∧ x_1) ∨ (x_0 ∧ x)`,
//! 2. `x_k ≤ x_{k+1} ∨ x` for `0 ≤ k < n`,
//! 3. `x_{k-1} ≰ (x_k ∧ x_{k+1}) ∨ x` for `1 ≤ k < n`.
//!
//! A weak bi-track joins two weak tracks with a common head `x_0 = y_0`
//! such that `x_0 ≤ x_1 ∨ y_1` and `x_0 ≠ (x_0 ∧ x_1) ∨ (x_0 ∧ y_1)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{FinLattice, LatticeMap};
use crate::projectivity::{hom_from_lambda, LambdaConfig, LambdaKind};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeakTrack {
    pub entries: Vec<usize>,
    pub side: usize,
}

impl WeakTrack {
    pub fn length(&self) -> usize {
        self.entries.len().saturating_sub(1)
    }

    /// The first violated condition, if any.
    pub fn violation(&self, l: &FinLattice) -> Option<String> {
        let x = &self.entries;
        let s = self.side;
        if x.len() < 2 {
            return Some("a track needs at least two entries".into());
        }
        if x.iter().chain([&s]).any(|&e| e >= l.len()) {
            return Some("entry out of range".into());
        }
        if x[0] == l.join(l.meet(x[0], x[1]), l.meet(x[0], s)) {
            return Some("condition (1) fails".into());
        }
        for k in 0..x.len() - 1 {
            if !l.leq(x[k], l.join(x[k + 1], s)) {
                return Some(format!("condition (2) fails at k = {k}"));
            }
        }
        for k in 1..x.len() - 1 {
            if l.leq(x[k - 1], l.join(l.meet(x[k], x[k + 1]), s)) {
                return Some(format!("condition (3) fails at k = {k}"));
            }
        }
        None
    }

    pub fn is_valid(&self, l: &FinLattice) -> bool {
        self.violation(l).is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeakBiTrack {
    pub sigma: WeakTrack,
    pub tau: WeakTrack,
}

impl WeakBiTrack {
    pub fn index(&self) -> (usize, usize) {
        (self.sigma.length(), self.tau.length())
    }

    pub fn trace(&self) -> (Vec<usize>, Vec<usize>) {
        (self.sigma.entries.clone(), self.tau.entries.clone())
    }

    pub fn mirror(&self) -> WeakBiTrack {
        WeakBiTrack {
            sigma: self.tau.clone(),
            tau: self.sigma.clone(),
        }
    }

    pub fn violation(&self, l: &FinLattice) -> Option<String> {
        for (name, t) in [("σ", &self.sigma), ("τ", &self.tau)] {
            if let Some(v) = t.violation(l) {
                return Some(format!("{name}: {v}"));
            }
        }
        let (x, y) = (&self.sigma.entries, &self.tau.entries);
        if x[0] != y[0] {
            return Some("heads differ".into());
        }
        if !bi_condition(l, x[0], x[1], y[1]) {
            return Some("the heads are not covered nontrivially by x_1 ∨ y_1".into());
        }
        None
    }

    pub fn is_valid(&self, l: &FinLattice) -> bool {
        self.violation(l).is_none()
    }

    pub fn to_json(&self, l: &FinLattice) -> BiTrackJson {
        let side = |t: &WeakTrack| TrackJson {
            entries: t.entries.iter().map(|&e| l.label(e).to_string()).collect(),
            side: l.label(t.side).to_string(),
        };
        BiTrackJson {
            sigma: side(&self.sigma),
            tau: side(&self.tau),
        }
    }

    pub fn from_json(l: &FinLattice, json: &BiTrackJson) -> Result<Self> {
        let side = |t: &TrackJson| -> Result<WeakTrack> {
            Ok(WeakTrack {
                entries: t.entries.iter().map(|e| l.resolve(e)).collect::<Result<_>>()?,
                side: l.resolve(&t.side)?,
            })
        };
        Ok(WeakBiTrack {
            sigma: side(&json.sigma)?,
            tau: side(&json.tau)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackJson {
    pub entries: Vec<String>,
    pub side: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiTrackJson {
    pub sigma: TrackJson,
    pub tau: TrackJson,
}

fn bi_condition(l: &FinLattice, z: usize, x1: usize, y1: usize) -> bool {
    l.leq(z, l.join(x1, y1)) && z != l.join(l.meet(z, x1), l.meet(z, y1))
}

fn extend(l: &FinLattice, entries: &mut Vec<usize>, side: usize, len: usize, out: &mut Vec<WeakTrack>) {
    if entries.len() == len + 1 {
        out.push(WeakTrack {
            entries: entries.clone(),
            side,
        });
        return;
    }
    let k = entries.len() - 1;
    let (prev, last) = (entries[k - 1], entries[k]);
    for next in 0..l.len() {
        // (2) at k and (3) at k
        if l.leq(last, l.join(next, side)) && !l.leq(prev, l.join(l.meet(last, next), side)) {
            entries.push(next);
            extend(l, entries, side, len, out);
            entries.pop();
        }
    }
}

/// Weak tracks of length `n` with head `x0`, ordered by `(x_1, x, x_2, ..)`.
pub fn weak_tracks_from(l: &FinLattice, x0: usize, n: usize) -> Vec<WeakTrack> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for x1 in 0..l.len() {
        for side in 0..l.len() {
            if x0 == l.join(l.meet(x0, x1), l.meet(x0, side)) || !l.leq(x0, l.join(x1, side)) {
                continue;
            }
            let mut entries = vec![x0, x1];
            extend(l, &mut entries, side, n, &mut out);
        }
    }
    out
}

/// All weak tracks of length `n`, ordered by head and then as in
/// [`weak_tracks_from`].
pub fn weak_tracks(l: &FinLattice, n: usize) -> Vec<WeakTrack> {
    (0..l.len())
        .into_par_iter()
        .map(|x0| weak_tracks_from(l, x0, n))
        .collect::<Vec<_>>()
        .concat()
}

/// All weak bi-tracks of index `(m, n)`, ordered by head, then `σ`, then `τ`.
pub fn weak_bitracks(l: &FinLattice, m: usize, n: usize) -> Vec<WeakBiTrack> {
    if m == 0 || n == 0 {
        return Vec::new();
    }
    (0..l.len())
        .into_par_iter()
        .map(|z| {
            let sigmas = weak_tracks_from(l, z, m);
            if sigmas.is_empty() {
                return Vec::new();
            }
            let taus = weak_tracks_from(l, z, n);
            let mut out = Vec::new();
            for s in &sigmas {
                for t in &taus {
                    if bi_condition(l, z, s.entries[1], t.entries[1]) {
                        out.push(WeakBiTrack {
                            sigma: s.clone(),
                            tau: t.clone(),
                        });
                    }
                }
            }
            out
        })
        .collect::<Vec<_>>()
        .concat()
}

/// The embedding `Co(m + n) → L` sending `{i}` to `X_{m-i}` for `i < m` and
/// to `Y_{i-m+1}` for `m ≤ i < m + n`.
pub fn track_to_embedding(l: &FinLattice, t: &WeakBiTrack) -> Result<LatticeMap> {
    if let Some(v) = t.violation(l) {
        return Err(Error::Precondition(format!("invalid bi-track: {v}")));
    }
    let (m, n) = t.index();
    let mut gens: Vec<usize> = (1..=m).rev().map(|i| t.sigma.entries[i]).collect();
    gens.extend((1..=n).map(|j| t.tau.entries[j]));
    let kind = LambdaKind::Plain(m + n);
    let cfg = LambdaConfig::new(l, kind, gens)?;
    let phi = hom_from_lambda(l, &cfg).map_err(|e| {
        Error::Verification(format!("singleton images do not induce a homomorphism: {e}"))
    })?;
    if !phi.is_injective() {
        return Err(Error::Verification("induced map is not injective".into()));
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{canonical_bitrack, co_chain, l_mn};

    #[test]
    fn distributive_lattices_have_none() {
        let l = FinLattice::boolean(3);
        assert!(weak_tracks(&l, 1).is_empty());
        assert!(weak_bitracks(&l, 1, 1).is_empty());
    }

    #[test]
    fn m3_track_of_length_one() {
        let l = FinLattice::m3();
        let t = WeakTrack {
            entries: vec![1, 2],
            side: 3,
        };
        assert!(t.is_valid(&l));
        assert!(weak_tracks(&l, 1).contains(&t));
    }

    #[test]
    fn canonical_tracks_embed_chains() {
        for (m, n) in [(1, 2), (2, 2)] {
            let l = l_mn(m, n);
            let t = canonical_bitrack(m, n);
            assert!(weak_bitracks(&l, m, n).contains(&t));
            let phi = track_to_embedding(&l, &t).unwrap();
            assert!(phi.is_embedding(&co_chain(m + n), &l));
        }
    }

    #[test]
    fn invalid_input_is_an_error() {
        let l = l_mn(1, 1);
        let mut t = canonical_bitrack(1, 1);
        t.tau.side = t.tau.entries[0];
        assert!(track_to_embedding(&l, &t).is_err());
    }
}
