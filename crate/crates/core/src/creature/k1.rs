//! Example 2.10: `dis = (u, i, A)`, norm `log2 |A|`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use super::{BlockRange, PartialFn, Violation};
use crate::error::{Error, Result};
use crate::product::odometer;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CreatureK1 {
    pub m_dn: u32,
    pub m_up: u32,
    pub u: Vec<u32>,
    pub i: u32,
    pub a: Vec<u32>,
    pub val: Vec<PartialFn>,
}

fn sorted_distinct(xs: &[u32]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

impl CreatureK1 {
    /// Normalizes `u`, `A` and `val` into sorted sets.
    pub fn new(m_dn: u32, m_up: u32, mut u: Vec<u32>, i: u32, mut a: Vec<u32>, mut val: Vec<PartialFn>) -> Self {
        u.sort_unstable();
        u.dedup();
        a.sort_unstable();
        a.dedup();
        val.sort();
        val.dedup();
        Self { m_dn, m_up, u, i, a, val }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.m_dn >= self.m_up {
            out.push(Violation::new("interval", format!("m_dn {} not below m_up {}", self.m_dn, self.m_up)));
        }
        if self.u.is_empty() || !sorted_distinct(&self.u) {
            out.push(Violation::new("u", "u must be a nonempty sorted set"));
        }
        if self.u.iter().any(|&p| p < self.m_dn || p >= self.m_up) {
            out.push(Violation::new("u", "u leaves [m_dn, m_up)"));
        }
        if !self.u.contains(&self.i) {
            out.push(Violation::new("i", format!("i = {} not in u", self.i)));
        }
        if self.a.is_empty() || !sorted_distinct(&self.a) {
            out.push(Violation::new("A", "A must be a nonempty sorted set"));
        }
        if self.a.iter().any(|&x| x > self.i) {
            out.push(Violation::new("A", "A is not a subset of i + 1"));
        }
        if self.val.is_empty() {
            out.push(Violation::new("val", "val is empty"));
        }
        if self.val.windows(2).any(|w| w[0] >= w[1]) {
            out.push(Violation::new("val", "val is not a sorted set"));
        }
        for f in &self.val {
            if !f.domain().eq(self.u.iter().copied()) {
                out.push(Violation::new("val", format!("{f} is not defined exactly on u")));
            } else if f.pairs().iter().any(|&(p, v)| v > p) {
                out.push(Violation::new("val", format!("{f} is not in the product of (j + 1)")));
            }
        }
        let heads: BTreeSet<u32> = self.val.iter().filter_map(|f| f.get(self.i)).collect();
        if !heads.iter().copied().eq(self.a.iter().copied()) {
            out.push(Violation::new("val", "values at i do not equal A"));
        }
        out
    }

    /// The dense law at position `l`: `|A| = l + 1` and exactly one member
    /// of `val` per element of `A`.
    pub fn is_r1_at(&self, l: usize) -> bool {
        self.a.len() == l + 1 && self.val.len() == self.a.len()
    }

    /// The member of `val` taking value `a` at `i`, if unique.
    pub fn unique_fn(&self, a: u32) -> Option<&PartialFn> {
        let mut it = self.val.iter().filter(|f| f.get(self.i) == Some(a));
        let f = it.next()?;
        it.next().is_none().then_some(f)
    }

    /// Collapse `A` to its least element, keeping the least matching function.
    pub fn min_creature(&self) -> Result<CreatureK1> {
        let a = *self.a.first().ok_or_else(|| Error::InvalidInput("empty A".into()))?;
        let f = self
            .val
            .iter()
            .find(|f| f.get(self.i) == Some(a))
            .ok_or_else(|| Error::InvalidInput("no function realizes min A".into()))?;
        Ok(CreatureK1::new(self.m_dn, self.m_up, self.u.clone(), self.i, alloc::vec![a], alloc::vec![f.clone()]))
    }
}

pub(crate) fn compose(parts: &[&CreatureK1], l_star: usize, rows: &[Vec<usize>]) -> Result<CreatureK1> {
    if l_star >= parts.len() {
        return Err(Error::InvalidChoice(format!("l* = {l_star} outside {} blocks", parts.len())));
    }
    if rows.is_empty() {
        return Err(Error::InvalidChoice("val must be nonempty".into()));
    }
    let mut val = Vec::with_capacity(rows.len());
    for row in rows {
        if row.len() != parts.len() {
            return Err(Error::InvalidChoice("each val row needs one index per block".into()));
        }
        let mut f = PartialFn::default();
        for (p, &ix) in parts.iter().zip(row) {
            let g = p.val.get(ix).ok_or_else(|| Error::InvalidChoice(format!("val index {ix} out of range")))?;
            f = f.union(g).ok_or_else(|| Error::InvalidInput("blocks overlap".into()))?;
        }
        val.push(f);
    }
    let t = parts[l_star];
    let a: Vec<u32> = val.iter().filter_map(|f| f.get(t.i)).collect();
    let u = parts.iter().flat_map(|p| p.u.iter().copied()).collect();
    Ok(CreatureK1::new(parts[0].m_dn, parts[parts.len() - 1].m_up, u, t.i, a, val))
}

fn all_rows(parts: &[&CreatureK1]) -> Vec<Vec<usize>> {
    let mut rows = Vec::new();
    let mut digits = alloc::vec![0u32; parts.len()];
    loop {
        rows.push(digits.iter().map(|&d| d as usize).collect());
        if !odometer(&mut digits, |j| parts[j].val.len() as u32) {
            return rows;
        }
    }
}

pub(crate) fn count(parts: &[&CreatureK1]) -> u128 {
    let p = parts.iter().try_fold(1u128, |acc, c| acc.checked_mul(c.val.len() as u128));
    match p {
        Some(p) if p < 127 => (parts.len() as u128).saturating_mul((1u128 << p) - 1),
        _ => u128::MAX,
    }
}

pub(crate) fn enumerate(parts: &[&CreatureK1], guard: usize) -> Result<Vec<CreatureK1>> {
    if count(parts) > guard as u128 {
        return Err(Error::GuardExceeded { limit: guard });
    }
    let rows = all_rows(parts);
    if rows.len() >= 63 {
        return Err(Error::GuardExceeded { limit: guard });
    }
    let mut out = Vec::new();
    for l_star in 0..parts.len() {
        for mask in 1u64..(1u64 << rows.len()) {
            let chosen: Vec<Vec<usize>> = crate::subset::elements(mask).into_iter().map(|b| rows[b as usize].clone()).collect();
            out.push(compose(parts, l_star, &chosen)?);
        }
    }
    Ok(out)
}

pub(crate) fn contains(parts: &[&CreatureK1], x: &CreatureK1) -> bool {
    let (first, last) = (parts[0], parts[parts.len() - 1]);
    if x.m_dn != first.m_dn || x.m_up != last.m_up || !x.validate().is_empty() {
        return false;
    }
    let u: Vec<u32> = parts.iter().flat_map(|p| p.u.iter().copied()).collect();
    if u != x.u {
        return false;
    }
    if !parts.iter().any(|p| p.i == x.i) {
        return false;
    }
    x.val.iter().all(|f| {
        let mut covered = 0;
        let ok = parts.iter().all(|p| {
            let piece = f.restrict(p.m_dn, p.m_up);
            covered += piece.pairs().len();
            p.val.contains(&piece)
        });
        ok && covered == f.pairs().len()
    })
}

pub(crate) fn dense_embed(src: &[&CreatureK1], target: usize) -> Result<(Vec<CreatureK1>, Vec<BlockRange>)> {
    let mut out = Vec::with_capacity(target);
    let mut ranges = Vec::with_capacity(target);
    let mut cursor = 0;
    for l in 0..target {
        let e = (cursor..src.len())
            .find(|&e| src[e].a.len() > l)
            .ok_or(Error::InsufficientMaterial { index: l })?;
        let parts = &src[cursor..=e];
        let top = src[e];
        let side: Vec<usize> = parts.iter().map(|_| 0).collect();
        let rows: Vec<Vec<usize>> = top.a[..=l]
            .iter()
            .map(|&a| {
                let ix = top.val.iter().position(|f| f.get(top.i) == Some(a)).unwrap();
                let mut row = side.clone();
                row[e - cursor] = ix;
                row
            })
            .collect();
        out.push(compose(parts, e - cursor, &rows)?);
        ranges.push(BlockRange { start: cursor, end: e });
        cursor = e + 1;
    }
    Ok((out, ranges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::creature::{sigma_compose, sigma_contains, sigma_count, sigma_enumerate, Choice, Creature};
    use alloc::vec;

    fn f(pairs: &[(u32, u32)]) -> PartialFn {
        PartialFn::new(pairs.to_vec()).unwrap()
    }

    fn block(dn: u32, up: u32, i: u32, a: &[u32]) -> Creature {
        let val = a.iter().map(|&x| f(&[(i, x)])).collect();
        Creature::K1(CreatureK1::new(dn, up, vec![i], i, a.to_vec(), val))
    }

    #[test]
    fn validation_clauses() {
        let good = block(0, 2, 1, &[0, 1]);
        assert!(good.is_valid());
        let Creature::K1(mut bad) = good.clone() else { unreachable!() };
        bad.a = vec![0, 2];
        assert!(bad.validate().iter().any(|v| v.clause == "A"));
        let Creature::K1(mut bad) = good.clone() else { unreachable!() };
        bad.i = 0;
        assert!(bad.validate().iter().any(|v| v.clause == "i"));
        let Creature::K1(mut bad) = good else { unreachable!() };
        bad.val.push(f(&[(1, 1), (0, 0)]));
        assert!(bad.validate().iter().any(|v| v.clause == "val"));
    }

    #[test]
    fn sigma_matches_count_and_membership() {
        let parts = vec![block(0, 1, 0, &[0]), block(1, 2, 1, &[0, 1]), block(2, 4, 3, &[1, 3])];
        let all = sigma_enumerate(&parts, 1 << 20).unwrap();
        assert_eq!(all.len() as u128, sigma_count(&parts).unwrap());
        assert_eq!(all.len(), 3 * ((1 << 4) - 1));
        let distinct: BTreeSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all.iter().all(|c| c.is_valid() && sigma_contains(&parts, c)));
        assert!(!sigma_contains(&parts[..2], &all[0]));
    }

    #[test]
    fn compose_derives_a_from_i() {
        let parts = vec![block(0, 1, 0, &[0]), block(1, 3, 2, &[0, 2])];
        let c = sigma_compose(&parts, &Choice::K1 { l_star: 1, val: vec![vec![0, 1]] }).unwrap();
        let k = c.as_k1().unwrap();
        assert_eq!(k.a, vec![2]);
        assert_eq!(k.u, vec![0, 2]);
        assert!(sigma_compose(&parts, &Choice::K1 { l_star: 2, val: vec![vec![0, 0]] }).is_err());
    }

    #[test]
    fn min_creature_collapses() {
        let Creature::K1(x) = block(0, 3, 2, &[0, 1, 2]) else { unreachable!() };
        let m = x.min_creature().unwrap();
        assert_eq!(m.a, vec![0]);
        assert_eq!(m.val.len(), 1);
        assert!(m.validate().is_empty());
    }
}
