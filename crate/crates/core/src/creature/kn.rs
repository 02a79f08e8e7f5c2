//! Example 2.13: `dis = (X, phi)` with `X` a proper subset of the interval
//! and `val` the `N` constant extensions of `phi`.

use alloc::format;
use alloc::vec::Vec;

use super::{PartialFn, Violation};
use crate::error::{Error, Result};
use crate::hj::{Letter, MAX_ALPHABET};
use crate::product::odometer_u8;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CreatureKN {
    pub n: u8,
    pub m_dn: u32,
    pub m_up: u32,
    /// Sorted points of `X`.
    pub x: Vec<u32>,
    /// `phi` on `x`, position by position.
    pub phi: Vec<u8>,
}

impl CreatureKN {
    /// Builds from `(point, value)` pairs of `phi`.
    pub fn new(n: u8, m_dn: u32, m_up: u32, mut phi: Vec<(u32, u8)>) -> Self {
        phi.sort_unstable();
        phi.dedup_by_key(|p| p.0);
        Self { n, m_dn, m_up, x: phi.iter().map(|p| p.0).collect(), phi: phi.iter().map(|p| p.1).collect() }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if !(1..=MAX_ALPHABET).contains(&self.n) {
            out.push(Violation::new("alphabet", format!("N = {} outside 1..={MAX_ALPHABET}", self.n)));
        }
        if self.m_dn >= self.m_up {
            out.push(Violation::new("interval", format!("m_dn {} not below m_up {}", self.m_dn, self.m_up)));
        }
        if self.x.windows(2).any(|w| w[0] >= w[1]) {
            out.push(Violation::new("X", "X is not a sorted set"));
        }
        if self.x.iter().any(|&p| p < self.m_dn || p >= self.m_up) {
            out.push(Violation::new("X", "X leaves [m_dn, m_up)"));
        }
        if self.x.len() as u64 >= (self.m_up as u64).saturating_sub(self.m_dn as u64) {
            out.push(Violation::new("X", "X is not a proper subset of the interval"));
        }
        if self.phi.len() != self.x.len() {
            out.push(Violation::new("phi", "phi is not defined exactly on X"));
        }
        if self.phi.iter().any(|&v| v >= self.n) {
            out.push(Violation::new("phi", "phi leaves the alphabet"));
        }
        out
    }

    pub fn phi_at(&self, point: u32) -> Option<u8> {
        self.x.binary_search(&point).ok().map(|i| self.phi[i])
    }

    /// `phi` extended by the constant `a` off `X`.
    pub fn fill(&self, a: u8) -> PartialFn {
        let pairs = (self.m_dn..self.m_up).map(|p| (p, self.phi_at(p).unwrap_or(a) as u32)).collect();
        PartialFn::new(pairs).unwrap()
    }

    pub fn val(&self) -> Vec<PartialFn> {
        let mut v: Vec<PartialFn> = (0..self.n).map(|a| self.fill(a)).collect();
        v.sort();
        v
    }
}

pub(crate) fn compose(parts: &[&CreatureKN], letters: &[Letter]) -> Result<CreatureKN> {
    if letters.len() != parts.len() {
        return Err(Error::InvalidChoice("one letter per block".into()));
    }
    if !letters.contains(&Letter::Var) {
        return Err(Error::InvalidChoice("at least one block must be kept".into()));
    }
    let n = parts[0].n;
    let mut phi = Vec::new();
    for (p, l) in parts.iter().zip(letters) {
        match *l {
            Letter::Var => phi.extend(p.x.iter().copied().zip(p.phi.iter().copied())),
            Letter::Sym(a) if a < n => phi.extend(p.fill(a).pairs().iter().map(|&(q, v)| (q, v as u8))),
            Letter::Sym(a) => return Err(Error::InvalidChoice(format!("letter {a} outside the alphabet"))),
        }
    }
    Ok(CreatureKN::new(n, parts[0].m_dn, parts[parts.len() - 1].m_up, phi))
}

pub(crate) fn count(parts: &[&CreatureKN]) -> u128 {
    let n = parts[0].n as u128;
    let len = parts.len() as u32;
    match ((n + 1).checked_pow(len), n.checked_pow(len)) {
        (Some(a), Some(b)) => a - b,
        _ => u128::MAX,
    }
}

pub(crate) fn enumerate(parts: &[&CreatureKN], guard: usize) -> Result<Vec<CreatureKN>> {
    if count(parts) > guard as u128 {
        return Err(Error::GuardExceeded { limit: guard });
    }
    let n = parts[0].n;
    let mut digits = alloc::vec![0u8; parts.len()];
    let mut out = Vec::new();
    loop {
        if digits.contains(&n) {
            let letters: Vec<Letter> = digits.iter().map(|&d| if d == n { Letter::Var } else { Letter::Sym(d) }).collect();
            out.push(compose(parts, &letters)?);
        }
        if !odometer_u8(&mut digits, n + 1) {
            return Ok(out);
        }
    }
}

/// Recovers the letters of a `Sigma_N` member: `v` where the block is kept,
/// the fill constant where it is filled.
pub(crate) fn letters_of(parts: &[&CreatureKN], c: &CreatureKN) -> Option<Vec<Letter>> {
    if c.n != parts[0].n || c.m_dn != parts[0].m_dn || c.m_up != parts[parts.len() - 1].m_up {
        return None;
    }
    if !c.validate().is_empty() {
        return None;
    }
    let mut letters = Vec::with_capacity(parts.len());
    for p in parts {
        let kept = (p.m_dn..p.m_up).all(|q| c.phi_at(q) == p.phi_at(q));
        if kept {
            letters.push(Letter::Var);
            continue;
        }
        let mut fill = None;
        for q in p.m_dn..p.m_up {
            let v = c.phi_at(q)?;
            match p.phi_at(q) {
                Some(w) if w != v => return None,
                Some(_) => {}
                None if fill.is_some_and(|a| a != v) => return None,
                None => fill = Some(v),
            }
        }
        letters.push(Letter::Sym(fill?));
    }
    letters.contains(&Letter::Var).then_some(letters)
}
