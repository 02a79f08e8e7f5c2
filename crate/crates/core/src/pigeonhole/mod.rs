//! Finite-depth pigeonhole (A.4) for the three example spaces: coloring
//! reductions to the tree homogenizer or to Hales-Jewett spans, fusion
//! across levels, and the possibility-coloring recoveries.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::creature::{le_fin, sigma_contains, BlockRange, CandidatePrefix, Creature, Example};
use crate::error::{Error, Result};

pub mod ex210;
pub mod ex211;
pub mod ex213;
pub mod fusion;

pub use fusion::{fusion, recover_conclusion, verify_fusion, verify_recovery, FusionResult, Recovery, Variant};

/// A 2-coloring of creatures; elements of `r_k[k-1, s]` are colored through
/// their last creature.
pub type Oracle<'a> = &'a dyn Fn(&Creature) -> u8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct A4Options {
    /// Creatures asked for past position `k - 1`.
    pub targets: usize,
    /// Fusion levels run before selecting `targets` of one color (2.11).
    pub levels: Option<usize>,
    /// Node budget of each homogenizer or span search.
    pub node_budget: u64,
    /// Bound on candidate outputs tried across backtracking.
    pub visit_budget: u64,
}

impl Default for A4Options {
    fn default() -> Self {
        Self { targets: 2, levels: None, node_budget: crate::tree::DEFAULT_NODE_BUDGET, visit_budget: 200_000 }
    }
}

/// One homogenization step of a reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StepRecord {
    pub level: usize,
    pub l: Vec<usize>,
    pub n: Vec<usize>,
    pub color: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct A4Certificate {
    pub example: Example,
    pub k: usize,
    /// Length of the base prefix.
    pub depth: usize,
    pub targets: usize,
    pub prefix: CandidatePrefix,
    /// Source blocks of the base for every creature of `prefix`.
    pub witness: Vec<BlockRange>,
    pub color: u8,
    /// Number of elements of the truncated `r_k[k-1, prefix]` checked.
    pub elements: u64,
    pub steps: Vec<StepRecord>,
    pub verified: bool,
}

fn check_base(base: &CandidatePrefix, k: usize, opts: &A4Options) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if opts.targets == 0 {
        return Err(Error::InvalidInput("targets must be at least 1".into()));
    }
    if !base.validate().is_empty() {
        return Err(Error::InvalidInput("base prefix is not valid".into()));
    }
    if !base.is_dense() {
        return Err(Error::InvalidInput("base prefix is not in the dense subspace".into()));
    }
    if base.len() < k - 1 + opts.targets {
        return Err(Error::NotFoundWithinDepth { depth: base.len(), budget_exhausted: false });
    }
    Ok(())
}

/// A.4 at level `k` on `base`: a prefix `s <= base` extending
/// `r_{k-1}(base)` by `opts.targets` creatures on whose truncated
/// `r_k[k-1, s]` the oracle is constant.
pub fn a4(base: &CandidatePrefix, k: usize, oracle: Oracle, opts: &A4Options) -> Result<A4Certificate> {
    a4_visit(base, k, oracle, opts, &mut |_| true)?
        .ok_or(Error::NotFoundWithinDepth { depth: base.len(), budget_exhausted: false })
}

/// Offers verified certificates in search order until `visit` accepts one.
pub fn a4_visit(
    base: &CandidatePrefix,
    k: usize,
    oracle: Oracle,
    opts: &A4Options,
    visit: &mut dyn FnMut(&A4Certificate) -> bool,
) -> Result<Option<A4Certificate>> {
    check_base(base, k, opts)?;
    let mut accept = |mut cert: A4Certificate| -> bool {
        match verify_a4(base, &cert, oracle) {
            Ok(count) => {
                cert.elements = count;
                cert.verified = true;
                visit(&cert)
            }
            Err(_) => false,
        }
    };
    let mut found = None;
    let mut sink = |cert: A4Certificate| {
        let keep = cert.clone();
        if accept(cert) {
            found = Some(keep);
            true
        } else {
            false
        }
    };
    match base.example {
        Example::Ex210 => ex210::search(base, k, oracle, opts, &mut sink)?,
        Example::Ex211 => ex211::search(base, k, oracle, opts, &mut sink)?,
        Example::Ex213 => ex213::search(base, k, oracle, opts, &mut sink)?,
    }
    Ok(found.map(|mut c| {
        c.verified = true;
        c.elements = verify_a4(base, &c, oracle).unwrap_or(0);
        c
    }))
}

/// Calls `f` on every element of the truncated `r_k[k-1, s]` (its last
/// creature); stops early when `f` returns false. Returns the count visited.
pub fn for_each_element(s: &CandidatePrefix, k: usize, f: &mut dyn FnMut(&Creature) -> bool) -> Result<u64> {
    if k == 0 || k > s.len() {
        return Ok(0);
    }
    match s.example {
        Example::Ex210 => ex210::for_each_element(&s.creatures, k, f),
        Example::Ex211 => ex211::for_each_element(&s.creatures, k, f),
        Example::Ex213 => ex213::for_each_element(&s.creatures, k, f),
    }
}

/// Checks that `ranges` witness `s <= base` block by block and returns
/// the position one past the last source block used.
pub fn check_witness(base: &CandidatePrefix, s: &CandidatePrefix, ranges: &[BlockRange]) -> core::result::Result<usize, String> {
    if ranges.len() != s.len() {
        return Err("one block range per creature is required".into());
    }
    let tight = base.example.is_tight();
    let mut prev: Option<usize> = None;
    for (p, (r, c)) in ranges.iter().zip(&s.creatures).enumerate() {
        if r.start > r.end || r.end >= base.len() {
            return Err(format!("creature {p}: block range out of bounds"));
        }
        if let Some(e) = prev {
            if (tight && r.start != e + 1) || r.start <= e {
                return Err(format!("creature {p}: block ranges are not consecutive"));
            }
        }
        if !sigma_contains(&base.creatures[r.start..=r.end], c) {
            return Err(format!("creature {p}: not a composition of base blocks {}..={}", r.start, r.end));
        }
        prev = Some(r.end);
    }
    let top = prev.map_or(0, |e| e + 1);
    if !le_fin(s, &base.r(top)) {
        return Err("prefix is not <=_fin the base".into());
    }
    Ok(top)
}

/// Re-derives a certificate from scratch: validity, block witness,
/// `r_{k-1}` agreement, the dense law and constancy on every element.
pub fn verify_a4(base: &CandidatePrefix, cert: &A4Certificate, oracle: Oracle) -> core::result::Result<u64, String> {
    let s = &cert.prefix;
    if s.example != base.example || cert.example != base.example {
        return Err("example mismatch".into());
    }
    if cert.k == 0 || s.len() != cert.k - 1 + cert.targets {
        return Err("prefix length does not match k and targets".into());
    }
    if let Some(v) = s.validate().first() {
        return Err(format!("invalid prefix: {}: {}", v.clause, v.detail));
    }
    if !s.is_dense() {
        return Err("prefix is not in the dense subspace".into());
    }
    if s.creatures[..cert.k - 1] != base.creatures[..cert.k - 1] {
        return Err("prefix does not extend r_{k-1} of the base".into());
    }
    check_witness(base, s, &cert.witness)?;
    let mut bad = None;
    let count = for_each_element(s, cert.k, &mut |x| {
        if oracle(x) != cert.color {
            bad = Some(x.fingerprint());
            return false;
        }
        true
    })
    .map_err(|e| format!("{e}"))?;
    if let Some(fp) = bad {
        return Err(format!("element {fp:016x} has the other color"));
    }
    if count == 0 {
        return Err("no elements to check".into());
    }
    Ok(count)
}

/// Named oracles selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum BuiltinColoring {
    Constant { color: u8 },
    Seeded { seed: u64 },
    /// Parity of `min A` (2.10), `min dis` (2.11) or `min X` (2.13).
    ParityMin,
    /// Parity of `|dis|` (2.11), `|u|` (2.10) or `|X|` (2.13).
    SizeParity,
    /// Whether the block starting at `m_dn` is kept (2.13 only).
    FirstLetter,
}

impl BuiltinColoring {
    pub fn color(&self, x: &Creature) -> u8 {
        match *self {
            BuiltinColoring::Constant { color } => color & 1,
            BuiltinColoring::Seeded { seed } => crate::sample::SeededColoring(seed).color(x),
            BuiltinColoring::ParityMin => {
                let m = match x {
                    Creature::K1(c) => c.a.first().copied(),
                    Creature::K2(c) => c.dis.first().copied(),
                    Creature::KN(c) => c.x.first().copied(),
                };
                (m.unwrap_or(0) & 1) as u8
            }
            BuiltinColoring::SizeParity => {
                let n = match x {
                    Creature::K1(c) => c.u.len(),
                    Creature::K2(c) => c.dis.len(),
                    Creature::KN(c) => c.x.len(),
                };
                (n & 1) as u8
            }
            BuiltinColoring::FirstLetter => 0,
        }
    }

    /// The oracle for elements over `base`; `FirstLetter` reads the first
    /// letter of the creature's word relative to the base blocks.
    pub fn oracle<'a>(&'a self, base: &'a [Creature]) -> impl Fn(&Creature) -> u8 + 'a {
        move |x: &Creature| match self {
            BuiltinColoring::FirstLetter => ex213::first_letter_kept(base, x) as u8,
            other => other.color(x),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::dense_prefix;

    #[test]
    fn constant_coloring_certifies_everywhere() {
        for ex in [Example::Ex210, Example::Ex211, Example::Ex213] {
            let base = dense_prefix(ex, 6, 3);
            let c = |_: &Creature| 1u8;
            let cert = a4(&base, 1, &c, &A4Options::default()).unwrap();
            assert!(cert.verified);
            assert_eq!(cert.color, 1);
            assert_eq!(verify_a4(&base, &cert, &c), Ok(cert.elements));
            assert!(verify_a4(&base, &cert, &|_: &Creature| 0u8).is_err());
        }
    }

    #[test]
    fn too_shallow_base_is_reported() {
        let base = dense_prefix(Example::Ex211, 2, 0);
        let opts = A4Options { targets: 3, ..A4Options::default() };
        assert!(matches!(a4(&base, 1, &|_: &Creature| 0u8, &opts), Err(Error::NotFoundWithinDepth { .. })));
    }
}
