//! All lattices of a given small size, one per isomorphism class.
//!
//! Middle elements are generated as naturally labelled posets (every element
//! is added above an order ideal of the earlier ones), bottom and top are
//! adjoined, non-lattices are dropped, and the rest is deduplicated with
//! [`isomorphism`]. Representatives keep the first labelling generated, so
//! the output order is fixed.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lattice::{isomorphism, FinLattice};

pub const MAX_CORPUS_SIZE: usize = 9;

/// Lattices with exactly `n` elements up to isomorphism.
pub fn lattices_of_size(n: usize) -> Result<Vec<FinLattice>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if n > MAX_CORPUS_SIZE {
        return Err(Error::SizeGuard(format!(
            "lattice enumeration is limited to {MAX_CORPUS_SIZE} elements"
        )));
    }
    if n == 1 {
        return Ok(vec![FinLattice::chain(1)]);
    }
    let m = n - 2;
    // below[i] = strict down-set of middle element i, as a mask over 0..m
    let mut below = vec![0u32; m];
    let mut out: Vec<FinLattice> = Vec::new();
    let mut buckets: HashMap<Vec<(usize, usize)>, Vec<usize>> = HashMap::new();
    extend(m, 0, &mut below, &mut |below| {
        let leq = |i: usize, j: usize| -> bool {
            // 0 is bottom, n-1 is top, middle element k sits at index k+1
            if i == j || i == 0 || j == n - 1 {
                return true;
            }
            if j == 0 || i == n - 1 {
                return false;
            }
            below[j - 1] >> (i - 1) & 1 == 1
        };
        let labels = (0..n).map(|i| i.to_string()).collect();
        let Ok(l) = FinLattice::from_leq_fn(n, labels, leq) else {
            return;
        };
        let key = signature(&l);
        let bucket = buckets.entry(key).or_default();
        if bucket.iter().any(|&i| isomorphism(&out[i], &l).is_some()) {
            return;
        }
        bucket.push(out.len());
        out.push(l);
    });
    Ok(out)
}

/// Lattices with at most `n` elements, grouped by size in increasing order.
pub fn lattices_up_to(n: usize) -> Result<Vec<FinLattice>> {
    let mut out = Vec::new();
    for k in 1..=n {
        out.extend(lattices_of_size(k)?);
    }
    Ok(out)
}

fn signature(l: &FinLattice) -> Vec<(usize, usize)> {
    let n = l.len();
    let mut v: Vec<_> = (0..n)
        .map(|x| {
            (
                (0..n).filter(|&y| l.leq(y, x)).count(),
                (0..n).filter(|&y| l.leq(x, y)).count(),
            )
        })
        .collect();
    v.sort_unstable();
    v
}

fn extend(m: usize, k: usize, below: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    if k == m {
        visit(below);
        return;
    }
    for d in 0u32..(1 << k) {
        // d must be down-closed
        let closed = (0..k).all(|i| d >> i & 1 == 0 || below[i] & !d == 0);
        if closed {
            below[k] = d;
            extend(m, k + 1, below, visit);
        }
    }
    below[k] = 0;
}
