//! Example 2.11: `dis` a set of points, `val` a set of 0/1 functions on it.

use alloc::format;
use alloc::vec::Vec;

use super::{BlockRange, PartialFn, Violation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CreatureK2 {
    pub m_dn: u32,
    pub m_up: u32,
    pub dis: Vec<u32>,
    pub val: Vec<PartialFn>,
}

impl CreatureK2 {
    pub fn new(m_dn: u32, m_up: u32, mut dis: Vec<u32>, mut val: Vec<PartialFn>) -> Self {
        dis.sort_unstable();
        dis.dedup();
        val.sort();
        val.dedup();
        Self { m_dn, m_up, dis, val }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.m_dn >= self.m_up {
            out.push(Violation::new("interval", format!("m_dn {} not below m_up {}", self.m_dn, self.m_up)));
        }
        if self.dis.windows(2).any(|w| w[0] >= w[1]) {
            out.push(Violation::new("dis", "dis is not a sorted set"));
        }
        if self.dis.iter().any(|&p| p < self.m_dn || p >= self.m_up) {
            out.push(Violation::new("dis", "dis leaves [m_dn, m_up)"));
        }
        if self.val.is_empty() {
            out.push(Violation::new("val", "val is empty"));
        }
        if self.val.windows(2).any(|w| w[0] >= w[1]) {
            out.push(Violation::new("val", "val is not a sorted set"));
        }
        for f in &self.val {
            if !f.domain().eq(self.dis.iter().copied()) {
                out.push(Violation::new("val", format!("{f} is not defined exactly on dis")));
            } else if f.pairs().iter().any(|&(_, v)| v > 1) {
                out.push(Violation::new("val", format!("{f} is not 0/1 valued")));
            }
        }
        out
    }
}

pub(crate) fn compose(parts: &[&CreatureK2], l_star: usize, picks: &[usize]) -> Result<CreatureK2> {
    let t = parts
        .get(l_star)
        .ok_or_else(|| Error::InvalidChoice(format!("l* = {l_star} outside {} blocks", parts.len())))?;
    if picks.is_empty() {
        return Err(Error::InvalidChoice("val must be nonempty".into()));
    }
    let val = picks
        .iter()
        .map(|&ix| t.val.get(ix).cloned().ok_or_else(|| Error::InvalidChoice(format!("val index {ix} out of range"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(CreatureK2::new(parts[0].m_dn, parts[parts.len() - 1].m_up, t.dis.clone(), val))
}

pub(crate) fn count(parts: &[&CreatureK2]) -> u128 {
    parts
        .iter()
        .map(|p| if p.val.len() < 127 { (1u128 << p.val.len()) - 1 } else { u128::MAX })
        .fold(0u128, |a, b| a.saturating_add(b))
}

pub(crate) fn enumerate(parts: &[&CreatureK2], guard: usize) -> Result<Vec<CreatureK2>> {
    if count(parts) > guard as u128 || parts.iter().any(|p| p.val.len() >= 63) {
        return Err(Error::GuardExceeded { limit: guard });
    }
    let mut out = Vec::new();
    for (l_star, p) in parts.iter().enumerate() {
        for mask in 1u64..(1u64 << p.val.len()) {
            let picks: Vec<usize> = crate::subset::elements(mask).into_iter().map(|b| b as usize).collect();
            out.push(compose(parts, l_star, &picks)?);
        }
    }
    Ok(out)
}

pub(crate) fn contains(parts: &[&CreatureK2], x: &CreatureK2) -> bool {
    x.m_dn == parts[0].m_dn
        && x.m_up == parts[parts.len() - 1].m_up
        && !x.val.is_empty()
        && parts.iter().any(|p| p.dis == x.dis && x.val.iter().all(|f| p.val.contains(f)))
}

pub(crate) fn dense_embed(src: &[&CreatureK2], target: usize) -> Result<(Vec<CreatureK2>, Vec<BlockRange>)> {
    let mut out = Vec::with_capacity(target);
    let mut ranges = Vec::with_capacity(target);
    let mut cursor = 0;
    for l in 0..target {
        let e = (cursor..src.len())
            .find(|&e| src[e].val.len() > l)
            .ok_or(Error::InsufficientMaterial { index: l })?;
        let picks: Vec<usize> = (0..=l).collect();
        out.push(compose(&src[cursor..=e], e - cursor, &picks)?);
        ranges.push(BlockRange { start: cursor, end: e });
        cursor = e + 1;
    }
    Ok((out, ranges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::creature::{le_fin, sigma_contains, sigma_count, sigma_enumerate, CandidatePrefix, Creature, Example};
    use alloc::vec;

    fn bits(dis: &[u32], v: u32) -> PartialFn {
        PartialFn::new(dis.iter().enumerate().map(|(b, &p)| (p, (v >> b) & 1)).collect()).unwrap()
    }

    fn block(dn: u32, up: u32, dis: &[u32], vs: &[u32]) -> Creature {
        Creature::K2(CreatureK2::new(dn, up, dis.to_vec(), vs.iter().map(|&v| bits(dis, v)).collect()))
    }

    #[test]
    fn validation() {
        assert!(block(0, 2, &[0, 1], &[0, 3]).is_valid());
        let Creature::K2(mut c) = block(0, 2, &[1], &[0]) else { unreachable!() };
        c.val.push(PartialFn::new(vec![(1, 2)]).unwrap());
        assert!(c.validate().iter().any(|v| v.clause == "val"));
        c.dis = vec![1, 5];
        assert!(c.validate().iter().any(|v| v.clause == "dis"));
    }

    #[test]
    fn sigma_count_and_members() {
        let parts = vec![block(0, 1, &[0], &[0]), block(3, 5, &[3, 4], &[0, 1, 2])];
        let all = sigma_enumerate(&parts, 1000).unwrap();
        assert_eq!(all.len() as u128, sigma_count(&parts).unwrap());
        assert_eq!(all.len(), 1 + 7);
        assert!(all.iter().all(|c| c.m_dn() == 0 && c.m_up() == 5 && sigma_contains(&parts, c)));
    }

    #[test]
    fn loose_order_skips_spacing_blocks() {
        let src = vec![block(0, 1, &[0], &[0]), block(2, 3, &[2], &[0, 1]), block(4, 6, &[5], &[0, 1])];
        let a = CandidatePrefix::new(Example::Ex211, src.clone());
        let x = Creature::K2(CreatureK2::new(0, 6, vec![5], vec![bits(&[5], 1)]));
        assert!(le_fin(&CandidatePrefix::new(Example::Ex211, vec![x.clone()]), &a));
        let y = Creature::K2(CreatureK2::new(0, 6, vec![9], vec![bits(&[9], 1)]));
        assert!(!le_fin(&CandidatePrefix::new(Example::Ex211, vec![y]), &a));
        let two = CandidatePrefix::new(Example::Ex211, vec![src[0].clone(), x]);
        assert!(!le_fin(&two, &a));
    }
}
