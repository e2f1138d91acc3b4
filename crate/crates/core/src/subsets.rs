//! Exhaustive subset enumeration over `0..n` (`n <= 64`) in canonical order:
//! by increasing size, then lexicographically on the ascending member list.
//!
//! Searches fan out over the smallest member with rayon and always return the
//! canonical-order-minimal hit, so results do not depend on scheduling.

use rayon::prelude::*;
use thiserror::Error;

/// Largest order supported by the single-word bitmask engines.
pub const MAX_MASK_ORDER: usize = 64;

/// Below this order the per-level work is too small to be worth splitting.
const PARALLEL_MIN_ORDER: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("graph of order {n} exceeds the enumeration cap {cap}")]
pub struct CapExceeded {
    pub n: usize,
    pub cap: usize,
}

/// Upper bound on the order of graphs that exhaustive checks will accept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationCap(usize);

impl EnumerationCap {
    pub const DEFAULT: EnumerationCap = EnumerationCap(22);

    /// Clamped to [`MAX_MASK_ORDER`].
    pub fn new(cap: usize) -> Self {
        Self(cap.min(MAX_MASK_ORDER))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn check(self, n: usize) -> Result<(), CapExceeded> {
        if n > self.0 {
            Err(CapExceeded { n, cap: self.0 })
        } else {
            Ok(())
        }
    }
}

impl Default for EnumerationCap {
    fn default() -> Self {
        Self::DEFAULT
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as u64
}

/// 1-based position of `mask` among all subsets of `0..n` in canonical order.
pub fn canonical_rank(n: usize, mask: u64) -> u64 {
    let s = mask.count_ones() as usize;
    let before: u64 = (0..s).map(|j| binomial(n, j)).sum();
    // Lexicographic rank within the level: for the i-th member c_i, count the
    // combinations that agree on c_0..c_{i-1} and pick a smaller i-th member.
    let mut rank = 0u64;
    let mut prev: Option<usize> = None;
    let mut m = mask;
    let mut i = 0;
    while m != 0 {
        let c = m.trailing_zeros() as usize;
        let lo = prev.map_or(0, |p| p + 1);
        for v in lo..c {
            rank += binomial(n - 1 - v, s - 1 - i);
        }
        prev = Some(c);
        m &= m - 1;
        i += 1;
    }
    before + rank + 1
}

fn dfs<F>(n: usize, start: usize, remaining: usize, mask: u64, pred: &F) -> Option<u64>
where
    F: Fn(u64) -> bool,
{
    if remaining == 0 {
        return pred(mask).then_some(mask);
    }
    for v in start..=n - remaining {
        if let Some(hit) = dfs(n, v + 1, remaining - 1, mask | 1 << v, pred) {
            return Some(hit);
        }
    }
    None
}

/// First subset of size `s` (lexicographic order) satisfying `pred`.
pub fn find_first_of_size<F>(n: usize, s: usize, pred: &F) -> Option<u64>
where
    F: Fn(u64) -> bool + Sync,
{
    assert!(n <= MAX_MASK_ORDER);
    if s > n {
        return None;
    }
    if s == 0 {
        return pred(0).then_some(0);
    }
    if n < PARALLEL_MIN_ORDER {
        return dfs(n, 0, s, 0, pred);
    }
    (0..=n - s)
        .into_par_iter()
        .find_map_first(|first| dfs(n, first + 1, s - 1, 1 << first, pred))
}

/// First subset in canonical order, among those of size at least `min_size`,
/// satisfying `pred`.
pub fn find_first<F>(n: usize, min_size: usize, pred: F) -> Option<u64>
where
    F: Fn(u64) -> bool + Sync,
{
    (min_size..=n).find_map(|s| find_first_of_size(n, s, &pred))
}

/// Calls `f` on every subset of size `s` in lexicographic order.
pub fn for_each_of_size<F: FnMut(u64)>(n: usize, s: usize, mut f: F) {
    if s > n {
        return;
    }
    let mut idx: Vec<usize> = (0..s).collect();
    loop {
        f(idx.iter().fold(0u64, |m, &v| m | 1 << v));
        // Advance to the next combination.
        let Some(i) = (0..s).rev().find(|&i| idx[i] < n - s + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..s {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Minimum of `f` over the subsets of each size `1..=n`; index `s-1` holds
/// the minimum over size `s`.
pub fn min_by_size<F>(n: usize, f: F) -> Vec<u64>
where
    F: Fn(u64) -> u64 + Sync,
{
    (1..=n)
        .map(|s| {
            if n < PARALLEL_MIN_ORDER {
                let mut best = u64::MAX;
                for_each_of_size(n, s, |m| best = best.min(f(m)));
                best
            } else {
                (0..=n - s)
                    .into_par_iter()
                    .map(|first| {
                        let mut best = u64::MAX;
                        for_each_of_size(n - first - 1, s - 1, |rest| {
                            best = best.min(f(1 << first | rest << (first + 1)));
                        });
                        best
                    })
                    .min()
                    .unwrap_or(u64::MAX)
            }
        })
        .collect()
}
