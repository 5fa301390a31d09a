//! Exhaustive ground truth for small cycles.
//!
//! Vertex sets are bitmasks: bit `i` set means vertex `i` is a member.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const DEFAULT_LIMIT: usize = 24;

/// Largest limit a caller may request; masks are `u64`.
pub const MAX_LIMIT: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominationCensus {
    pub n: usize,
    pub k: usize,
    pub total: u64,
    pub redundant: u64,
    pub minimal: u64,
}

fn check(n: usize, limit: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::CycleTooSmall(n));
    }
    if n > limit.min(MAX_LIMIT) {
        return Err(Error::EnumerationLimit { n, limit });
    }
    Ok(())
}

fn full(n: usize) -> u64 {
    (1u64 << n) - 1
}

fn rotl(m: u64, n: usize) -> u64 {
    ((m << 1) | (m >> (n - 1))) & full(n)
}

fn rotr(m: u64, n: usize) -> u64 {
    ((m >> 1) | (m << (n - 1))) & full(n)
}

/// `N[m]` as a mask.
pub fn closed_cover(n: usize, m: u64) -> u64 {
    m | rotl(m, n) | rotr(m, n)
}

pub fn mask_dominates(n: usize, m: u64) -> bool {
    closed_cover(n, m) == full(n)
}

/// Members whose removal keeps `m` dominating, i.e. `R(D)` for dominating `m`.
pub fn redundant_mask(n: usize, m: u64) -> u64 {
    let mut out = 0;
    let mut rest = m;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        rest ^= bit;
        if mask_dominates(n, m ^ bit) {
            out |= bit;
        }
    }
    out
}

/// True iff no proper subset of `m` dominates. Walks every submask.
pub fn subset_minimal(n: usize, m: u64) -> bool {
    let mut sub = m;
    loop {
        sub = sub.wrapping_sub(1) & m;
        if mask_dominates(n, sub) {
            return false;
        }
        if sub == 0 {
            return true;
        }
    }
}

/// All `k`-subsets of `0..n` in increasing mask order (Gosper's hack).
pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit = 1u64 << n;
    let mut next = if k == 0 {
        Some(0)
    } else if k > n {
        None
    } else {
        Some((1u64 << k) - 1)
    };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let nxt = (((r ^ cur) >> 2) / c) | r;
            (nxt < limit).then_some(nxt)
        };
        Some(cur)
    })
}

/// All dominating sets of `C_n` as masks.
pub fn dominating_sets(n: usize) -> Result<Vec<u64>> {
    check(n, DEFAULT_LIMIT)?;
    Ok((0..1u64 << n)
        .into_par_iter()
        .filter(|&m| mask_dominates(n, m))
        .collect())
}

pub fn min_dominating_size(n: usize) -> Result<usize> {
    min_dominating_size_with_limit(n, DEFAULT_LIMIT)
}

pub fn min_dominating_size_with_limit(n: usize, limit: usize) -> Result<usize> {
    check(n, limit)?;
    (0..=n)
        .find(|&k| combinations(n, k).any(|m| mask_dominates(n, m)))
        .ok_or(Error::NotDominating)
}

pub fn census(n: usize, k: usize) -> Result<DominationCensus> {
    census_with_limit(n, k, DEFAULT_LIMIT)
}

pub fn census_with_limit(n: usize, k: usize, limit: usize) -> Result<DominationCensus> {
    check(n, limit)?;
    let mut c = DominationCensus {
        n,
        k,
        total: 0,
        redundant: 0,
        minimal: 0,
    };
    for m in combinations(n, k).filter(|&m| mask_dominates(n, m)) {
        c.total += 1;
        if redundant_mask(n, m) != 0 {
            c.redundant += 1;
        } else {
            c.minimal += 1;
        }
    }
    Ok(c)
}

/// Every dominating set of size `⌊n/2⌋ + q` with `q ≥ 1` has at least `q`
/// redundant vertices.
pub fn verify_reducibility_lemma(n: usize) -> Result<bool> {
    verify_reducibility_lemma_with_limit(n, DEFAULT_LIMIT)
}

pub fn verify_reducibility_lemma_with_limit(n: usize, limit: usize) -> Result<bool> {
    check(n, limit)?;
    let half = n / 2;
    Ok((0..1u64 << n).into_par_iter().all(|m| {
        let size = m.count_ones() as usize;
        if size <= half || !mask_dominates(n, m) {
            return true;
        }
        redundant_mask(n, m).count_ones() as usize >= size - half
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{CycleGraph, VertexSet};

    #[test]
    fn min_sizes() {
        assert_eq!(min_dominating_size(3).unwrap(), 1);
        assert_eq!(min_dominating_size(6).unwrap(), 2);
        assert_eq!(min_dominating_size(7).unwrap(), 3);
        assert!(matches!(
            min_dominating_size(25),
            Err(Error::EnumerationLimit { n: 25, limit: 24 })
        ));
        assert_eq!(min_dominating_size_with_limit(25, 25).unwrap(), 9);
    }

    #[test]
    fn combinations_are_lexicographic_and_complete() {
        let all: Vec<u64> = combinations(5, 2).collect();
        assert_eq!(all.len(), 10);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|m| m.count_ones() == 2));
        assert_eq!(combinations(4, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(combinations(4, 4).collect::<Vec<_>>(), vec![15]);
        assert_eq!(combinations(3, 4).count(), 0);
    }

    #[test]
    fn census_examples() {
        let c = census(6, 2).unwrap();
        assert_eq!((c.total, c.redundant, c.minimal), (3, 0, 3));
        let c = census(6, 6).unwrap();
        assert_eq!((c.total, c.redundant), (1, 1));
        assert_eq!(census(5, 1).unwrap().total, 0);
    }

    #[test]
    fn large_sets_never_minimal() {
        for n in 3..=14 {
            for k in n / 2 + 1..=n {
                let c = census(n, k).unwrap();
                assert_eq!(c.minimal, 0, "n={n} k={k}");
                assert_eq!(c.redundant + c.minimal, c.total);
            }
            for k in 0..n.div_ceil(3) {
                assert_eq!(census(n, k).unwrap().total, 0);
            }
        }
    }

    #[test]
    fn reducibility_examples() {
        for n in [8, 9, 12] {
            assert!(verify_reducibility_lemma(n).unwrap());
        }
    }

    #[test]
    fn mask_redundancy_matches_graph_core() {
        for n in 3..=11 {
            let g = CycleGraph::new(n).unwrap();
            for m in dominating_sets(n).unwrap() {
                let s = VertexSet::from_mask(m);
                assert_eq!(
                    VertexSet::from_mask(redundant_mask(n, m)),
                    g.redundant_vertices(&s).unwrap()
                );
                assert_eq!(subset_minimal(n, m), g.is_minimal_dominating(&s).unwrap());
            }
        }
    }
}
