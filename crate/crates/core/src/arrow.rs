//! Exact certification of the arrow relation `r -> (m)^k_2`.
//!
//! Colorings of `[r]^k` are integers: bit `i` is the color of the k-subset
//! with colex rank `i`. Enumeration runs over `0..2^C(r,k)` in integer order
//! and the lowest-index counterexample is the witness.

use alloc::vec::Vec;

use crate::bits::BitTable;
use crate::error::{Error, Result};
use crate::subset::{binomial, colex_rank, elements, k_subsets, low_bits};

/// Default enumeration budget: colorings with more than 25 bits are out of
/// reach by design.
pub const DEFAULT_BUDGET: u64 = 1 << 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ArrowQuery {
    pub r: u32,
    pub m: u32,
    pub k: u32,
    pub colors: u32,
}

impl ArrowQuery {
    pub fn new(r: u32, m: u32, k: u32) -> Result<Self> {
        let q = Self { r, m, k, colors: 2 };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        if self.m == 0 {
            return Err(Error::InvalidInput("m must be at least 1".into()));
        }
        if self.colors != 2 {
            return Err(Error::InvalidInput("only 2-colorings are supported".into()));
        }
        if self.r > 64 {
            return Err(Error::InvalidInput("ground sets are limited to 64 points".into()));
        }
        Ok(())
    }

    /// Number of k-subsets, i.e. bits per coloring.
    pub fn table_len(&self) -> u64 {
        binomial(self.r as u64, self.k as u64).expect("C(r,k) with r <= 64 fits u64")
    }
}

/// A total 2-coloring of the k-subsets of `{0..r}`, indexed by colex rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HypergraphColoring {
    pub r: u32,
    pub k: u32,
    pub table: BitTable,
}

impl HypergraphColoring {
    pub fn new(r: u32, k: u32, table: BitTable) -> Result<Self> {
        let want = binomial(r as u64, k as u64).unwrap_or(u64::MAX);
        if r > 64 || table.len() as u64 != want {
            return Err(Error::InvalidInput(alloc::format!(
                "coloring of [{r}]^{k} needs {want} bits, got {}",
                table.len()
            )));
        }
        Ok(Self { r, k, table })
    }

    pub fn from_index(r: u32, k: u32, index: u64) -> Self {
        let len = binomial(r as u64, k as u64).unwrap() as usize;
        Self { r, k, table: BitTable::from_u64(index, len) }
    }

    /// Color of a k-subset given as a mask.
    pub fn color(&self, subset: u64) -> u8 {
        debug_assert_eq!(subset.count_ones(), self.k);
        self.table.get(colex_rank(subset) as usize)
    }

    /// Lowest homogeneous `m`-set (as a mask) and its color, if any.
    pub fn find_homogeneous(&self, m: u32) -> Option<(u64, u8)> {
        find_homogeneous(self.r, self.k, m, |s| self.color(s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Verdict {
    Holds,
    Fails,
    CapExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ArrowCertificate {
    pub query: ArrowQuery,
    pub verdict: Verdict,
    pub witness: Option<HypergraphColoring>,
    pub checked: u64,
}

/// Searches for an `m`-set `H` of `{0..r}` with `[H]^k` monochromatic.
///
/// `color` receives k-subsets as masks. Color 0 is tried before color 1;
/// within a color the lexicographically least increasing sequence wins.
/// When `m < k` the first `m` points qualify vacuously (reported with
/// color 0).
pub fn find_homogeneous(r: u32, k: u32, m: u32, color: impl Fn(u64) -> u8) -> Option<(u64, u8)> {
    assert!(k >= 1 && r <= 64);
    if m > r {
        return None;
    }
    if m < k {
        return Some((low_bits(m), 0));
    }
    for c in 0..2u8 {
        let cand = if k == 1 {
            (0..r).filter(|&y| color(1 << y) == c).fold(0u64, |acc, y| acc | 1 << y)
        } else {
            low_bits(r)
        };
        let mut chosen = Vec::with_capacity(m as usize);
        if let Some(set) = extend(k, m, c, &color, &mut chosen, cand) {
            return Some((set, c));
        }
    }
    None
}

// Invariant: every y in `cand` exceeds the last chosen point and every
// k-subset of chosen + {y} containing y has color `c`.
fn extend(k: u32, m: u32, c: u8, color: &impl Fn(u64) -> u8, chosen: &mut Vec<u32>, cand: u64) -> Option<u64> {
    if chosen.len() as u32 == m {
        return Some(chosen.iter().fold(0, |acc, &e| acc | 1 << e));
    }
    if chosen.len() as u32 + cand.count_ones() < m {
        return None;
    }
    let mut rest = cand;
    while rest != 0 {
        let x = rest.trailing_zeros();
        rest &= rest - 1;
        if chosen.len() as u32 + 1 + rest.count_ones() < m {
            return None;
        }
        let mut next = 0u64;
        let mut ys = rest;
        while ys != 0 {
            let y = ys.trailing_zeros();
            ys &= ys - 1;
            if compatible(k, c, color, chosen, x, y) {
                next |= 1 << y;
            }
        }
        chosen.push(x);
        if let Some(found) = extend(k, m, c, color, chosen, next) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

// Every k-subset {x, y} + T with T a (k-2)-subset of `chosen` has color c.
fn compatible(k: u32, c: u8, color: &impl Fn(u64) -> u8, chosen: &[u32], x: u32, y: u32) -> bool {
    if k < 2 {
        return true;
    }
    let need = k - 2;
    if (chosen.len() as u32) < need {
        return true;
    }
    let pair = (1u64 << x) | (1u64 << y);
    k_subsets(chosen.len() as u32, need).all(|sel| {
        let t = elements(sel).into_iter().fold(pair, |acc, i| acc | 1 << chosen[i as usize]);
        color(t) == c
    })
}

/// First coloring index in `lo..hi` without a homogeneous `m`-set.
///
/// This is the unit of work for parallel certification: callers may split
/// `0..2^C(r,k)` into disjoint ranges and keep the lowest hit.
pub fn scan_range(q: &ArrowQuery, lo: u64, hi: u64) -> Option<u64> {
    (lo..hi).find(|&index| {
        find_homogeneous(q.r, q.k, q.m, |s| ((index >> colex_rank(s)) & 1) as u8).is_none()
    })
}

/// Exhaustively decides `r -> (m)^k_2` under an enumeration budget.
pub fn certify_arrow(q: ArrowQuery, budget: u64) -> Result<ArrowCertificate> {
    q.validate()?;
    if budget == 0 {
        return Err(Error::InvalidInput("budget must be at least 1".into()));
    }
    if let Some(cert) = trivial_verdict(&q) {
        return Ok(cert);
    }
    let bits = q.table_len();
    if bits >= 63 || (1u64 << bits) > budget {
        return Ok(ArrowCertificate { query: q, verdict: Verdict::CapExceeded, witness: None, checked: 0 });
    }
    let total = 1u64 << bits;
    Ok(match scan_range(&q, 0, total) {
        Some(index) => ArrowCertificate {
            query: q,
            verdict: Verdict::Fails,
            witness: Some(HypergraphColoring::from_index(q.r, q.k, index)),
            checked: index + 1,
        },
        None => ArrowCertificate { query: q, verdict: Verdict::Holds, witness: None, checked: total },
    })
}

/// Verdicts that need no enumeration: `m > r` fails (no m-subset exists,
/// the all-zero coloring is a witness) and `m < k` holds vacuously when
/// `m <= r`, since an m-set then has no k-subsets.
pub fn trivial_verdict(q: &ArrowQuery) -> Option<ArrowCertificate> {
    if q.m > q.r {
        let len = q.table_len() as usize;
        return Some(ArrowCertificate {
            query: *q,
            verdict: Verdict::Fails,
            witness: Some(HypergraphColoring { r: q.r, k: q.k, table: BitTable::zeros(len) }),
            checked: 1,
        });
    }
    if q.m < q.k {
        return Some(ArrowCertificate { query: *q, verdict: Verdict::Holds, witness: None, checked: 0 });
    }
    None
}

/// Least `r <= cap` with `r -> (m)^k_2`.
pub fn least_arrow(m: u32, k: u32, cap: u32) -> Result<u32> {
    least_arrow_with_budget(m, k, cap, DEFAULT_BUDGET)
}

pub fn least_arrow_with_budget(m: u32, k: u32, cap: u32, budget: u64) -> Result<u32> {
    if m == 0 || k == 0 {
        return Err(Error::InvalidInput("m and k must be at least 1".into()));
    }
    for r in 0..=cap.min(64) {
        let cert = certify_arrow(ArrowQuery::new(r, m, k)?, budget)?;
        match cert.verdict {
            Verdict::Holds => return Ok(r),
            Verdict::Fails => continue,
            Verdict::CapExceeded => break,
        }
    }
    Err(Error::CapExceeded { what: "least_arrow", step: None })
}

/// The `j`-fold iterate `r_k^j(m)`: `r^1 = least_arrow(m)` and
/// `r^{i+1} = least_arrow(r^i)`. A cap failure reports the 1-based step.
pub fn iterate_arrow(j: u32, m: u32, k: u32, cap: u32) -> Result<u32> {
    iterate_with(j, m, |x| least_arrow(x, k, cap))
}

pub(crate) fn iterate_with(j: u32, m: u32, mut step: impl FnMut(u32) -> Result<u32>) -> Result<u32> {
    if j == 0 {
        return Err(Error::InvalidInput("iteration count must be at least 1".into()));
    }
    let mut value = m;
    for i in 1..=j {
        value = step(value).map_err(|e| match e {
            Error::CapExceeded { what, .. } => Error::CapExceeded { what, step: Some(i) },
            other => other,
        })?;
    }
    Ok(value)
}

/// The pigeonhole value `2m - 1`, the exact `k = 1` arrow number.
pub fn pigeonhole_arrow(m: u32) -> u32 {
    2 * m - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    // Brute force over all m-subsets, independent of the backtracking search.
    fn has_mono_brute(c: &HypergraphColoring, m: u32) -> bool {
        k_subsets(c.r, m).any(|h| {
            let ks: Vec<u8> = k_subsets(c.r, c.k)
                .filter(|&s| s & h == s)
                .map(|s| c.color(s))
                .collect();
            ks.windows(2).all(|w| w[0] == w[1])
        })
    }

    #[test]
    fn search_matches_brute_force_on_k5_and_k6() {
        for r in [4u32, 5] {
            let len = binomial(r as u64, 2).unwrap();
            for index in 0..(1u64 << len) {
                let c = HypergraphColoring::from_index(r, 2, index);
                assert_eq!(c.find_homogeneous(3).is_some(), has_mono_brute(&c, 3), "r={r} index={index}");
            }
        }
    }

    #[test]
    fn search_matches_brute_force_on_triples() {
        // [6]^3 has 20 triples; sample a spread of colorings.
        let mut x = 0x9e37_79b9_7f4a_7c15u64;
        for _ in 0..400 {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            let c = HypergraphColoring::from_index(6, 3, x & low_bits(20));
            assert_eq!(c.find_homogeneous(4).is_some(), has_mono_brute(&c, 4));
        }
    }

    #[test]
    fn returned_set_is_homogeneous() {
        let c = HypergraphColoring::from_index(6, 2, 0b101_1010_0110_1001);
        let (set, col) = c.find_homogeneous(3).unwrap();
        assert_eq!(set.count_ones(), 3);
        for s in k_subsets(6, 2).filter(|&s| s & set == s) {
            assert_eq!(c.color(s), col);
        }
    }

    #[test]
    fn pigeonhole_k1() {
        for m in 1..=6 {
            let r = 2 * m - 1;
            assert_eq!(certify_arrow(ArrowQuery::new(r, m, 1).unwrap(), DEFAULT_BUDGET).unwrap().verdict, Verdict::Holds);
            let fail = certify_arrow(ArrowQuery::new(r - 1, m, 1).unwrap(), DEFAULT_BUDGET).unwrap();
            assert_eq!(fail.verdict, Verdict::Fails);
            assert!(!has_mono_brute(fail.witness.as_ref().unwrap(), m));
        }
    }

    #[test]
    fn vacuous_and_degenerate_cases() {
        // m > r: fails with the zero coloring
        let c = certify_arrow(ArrowQuery::new(2, 3, 2).unwrap(), 10).unwrap();
        assert_eq!(c.verdict, Verdict::Fails);
        assert_eq!(c.witness.unwrap().table.len(), 1);
        // k > r, m <= r: holds vacuously
        let c = certify_arrow(ArrowQuery::new(2, 2, 3).unwrap(), 10).unwrap();
        assert_eq!(c.verdict, Verdict::Holds);
        // single pair
        let c = certify_arrow(ArrowQuery::new(2, 2, 2).unwrap(), 10).unwrap();
        assert_eq!(c.verdict, Verdict::Holds);
        assert_eq!(c.checked, 2);
    }

    #[test]
    fn budget_and_validation() {
        let c = certify_arrow(ArrowQuery::new(6, 3, 2).unwrap(), 1000).unwrap();
        assert_eq!(c.verdict, Verdict::CapExceeded);
        assert!(certify_arrow(ArrowQuery::new(6, 3, 2).unwrap(), 0).is_err());
        assert!(ArrowQuery::new(5, 0, 2).is_err());
        assert!(ArrowQuery::new(5, 2, 0).is_err());
    }

    #[test]
    fn least_and_iterated() {
        assert_eq!(least_arrow(4, 1, 20).unwrap(), 7);
        assert_eq!(least_arrow(2, 2, 10).unwrap(), 2);
        assert_eq!(least_arrow(1, 3, 10).unwrap(), 1);
        assert_eq!(iterate_arrow(1, 3, 1, 20).unwrap(), 5);
        assert_eq!(iterate_arrow(2, 2, 1, 20).unwrap(), 5);
        assert_eq!(iterate_arrow(2, 2, 2, 10).unwrap(), 2);
        assert_eq!(
            iterate_arrow(3, 2, 1, 6),
            Err(Error::CapExceeded { what: "least_arrow", step: Some(3) })
        );
        assert!(iterate_arrow(0, 2, 1, 6).is_err());
    }

    #[test]
    fn least_arrow_at_least_m() {
        for k in 1..=2 {
            for m in k..=3 {
                assert!(least_arrow(m, k, 10).unwrap() >= m);
            }
        }
    }
}
