//! Binomials, colexicographic ranking and k-subset enumeration.
//!
//! Subsets of a ground set of at most 64 points are bit masks. For a fixed
//! cardinality, increasing integer order of masks is exactly colex order,
//! so Gosper's successor doubles as the colex iterator.

use alloc::vec::Vec;

/// `C(n, k)`, or `None` on u64 overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Colex rank of a subset given as a mask: `sum_i C(e_i, i + 1)` over its
/// elements `e_0 < e_1 < ...`.
pub fn colex_rank(mut mask: u64) -> u64 {
    let mut rank = 0u64;
    let mut i = 1u64;
    while mask != 0 {
        let e = mask.trailing_zeros() as u64;
        rank += binomial(e, i).expect("rank of a 64-point subset fits in u64");
        mask &= mask - 1;
        i += 1;
    }
    rank
}

/// Inverse of [`colex_rank`] for subsets of size `k`.
pub fn colex_unrank(mut rank: u64, k: u32) -> u64 {
    let mut mask = 0u64;
    for i in (1..=k as u64).rev() {
        // largest e with C(e, i) <= rank
        let mut e = i - 1;
        while binomial(e + 1, i).is_some_and(|b| b <= rank) {
            e += 1;
        }
        rank -= binomial(e, i).unwrap();
        mask |= 1 << e;
    }
    mask
}

/// All `k`-subsets of `{0..n}` as masks, in colex order.
pub fn k_subsets(n: u32, k: u32) -> KSubsets {
    assert!(n <= 64, "ground sets are limited to 64 points");
    let next = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some(low_bits(k))
    };
    KSubsets { n, next }
}

pub struct KSubsets {
    n: u32,
    next: Option<u64>,
}

impl Iterator for KSubsets {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.next?;
        self.next = gosper_next(cur).filter(|&m| self.n == 64 || m >> self.n == 0);
        Some(cur)
    }
}

fn gosper_next(x: u64) -> Option<u64> {
    if x == 0 {
        return None;
    }
    let c = x & x.wrapping_neg();
    let (r, overflow) = x.overflowing_add(c);
    if overflow || r == 0 {
        return None;
    }
    Some((((r ^ x) >> 2) / c) | r)
}

#[inline]
pub fn low_bits(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Elements of a mask in increasing order.
pub fn elements(mut mask: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros());
        mask &= mask - 1;
    }
    out
}

pub fn mask_of(elems: &[u32]) -> u64 {
    elems.iter().fold(0, |m, &e| m | (1u64 << e))
}

/// Maps a mask over positions of `ground` to the selected ground elements.
pub fn select<T: Copy>(ground: &[T], mask: u64) -> Vec<T> {
    elements(mask).into_iter().map(|i| ground[i as usize]).collect()
}
