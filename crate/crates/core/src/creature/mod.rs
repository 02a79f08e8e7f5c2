//! FP creatures for the three example spaces and their subcomposition
//! machinery: validation, `Sigma` composition and enumeration, the finite
//! order `<=_fin`, depth, possibilities and dense embeddings.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hj::{Letter, VariableWord};

pub mod k1;
pub mod k2;
pub mod kn;

pub use k1::CreatureK1;
pub use k2::CreatureK2;
pub use kn::CreatureKN;

/// Default cap on the size of any enumerated `Sigma` set.
pub const SIGMA_GUARD: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Example {
    /// `H_1(n) = n + 1`, tight, `dis = (u, i, A)`.
    Ex210,
    /// `H_2(n) = 2`, loose, `dis` a set of points.
    Ex211,
    /// `H_N(n) = N`, tight, `dis = (X, phi)`.
    Ex213,
}

impl Example {
    pub fn is_tight(self) -> bool {
        !matches!(self, Example::Ex211)
    }

    pub fn name(self) -> &'static str {
        match self {
            Example::Ex210 => "2.10",
            Example::Ex211 => "2.11",
            Example::Ex213 => "2.13",
        }
    }
}

/// A finite partial function, stored as `(point, value)` pairs sorted by point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PartialFn(Vec<(u32, u32)>);

impl PartialFn {
    /// Sorts the pairs; `None` if a point is given two values.
    pub fn new(mut pairs: Vec<(u32, u32)>) -> Option<Self> {
        pairs.sort_unstable();
        pairs.dedup();
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return None;
        }
        Some(Self(pairs))
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn get(&self, point: u32) -> Option<u32> {
        self.0.binary_search_by_key(&point, |p| p.0).ok().map(|i| self.0[i].1)
    }

    pub fn domain(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().map(|p| p.0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Union of functions with disjoint domains.
    pub fn union(&self, other: &PartialFn) -> Option<PartialFn> {
        let mut pairs = self.0.clone();
        pairs.extend_from_slice(&other.0);
        let len = pairs.len();
        let out = PartialFn::new(pairs)?;
        (out.0.len() == len).then_some(out)
    }

    pub fn union_all<'a>(parts: impl IntoIterator<Item = &'a PartialFn>) -> Option<PartialFn> {
        parts.into_iter().try_fold(PartialFn::default(), |acc, f| acc.union(f))
    }

    /// Restriction to `[lo, hi)`.
    pub fn restrict(&self, lo: u32, hi: u32) -> PartialFn {
        PartialFn(self.0.iter().copied().filter(|p| p.0 >= lo && p.0 < hi).collect())
    }
}

impl core::fmt::Display for PartialFn {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str("{")?;
        for (i, (p, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}->{v}")?;
        }
        f.write_str("}")
    }
}

/// A failed validation clause.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Violation {
    pub clause: &'static str,
    pub detail: String,
}

impl Violation {
    pub(crate) fn new(clause: &'static str, detail: impl Into<String>) -> Self {
        Self { clause, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "example"))]
pub enum Creature {
    #[cfg_attr(feature = "serde", serde(rename = "2.10"))]
    K1(CreatureK1),
    #[cfg_attr(feature = "serde", serde(rename = "2.11"))]
    K2(CreatureK2),
    #[cfg_attr(feature = "serde", serde(rename = "2.13"))]
    KN(CreatureKN),
}

impl Creature {
    pub fn example(&self) -> Example {
        match self {
            Creature::K1(_) => Example::Ex210,
            Creature::K2(_) => Example::Ex211,
            Creature::KN(_) => Example::Ex213,
        }
    }

    pub fn m_dn(&self) -> u32 {
        match self {
            Creature::K1(c) => c.m_dn,
            Creature::K2(c) => c.m_dn,
            Creature::KN(c) => c.m_dn,
        }
    }

    pub fn m_up(&self) -> u32 {
        match self {
            Creature::K1(c) => c.m_up,
            Creature::K2(c) => c.m_up,
            Creature::KN(c) => c.m_up,
        }
    }

    pub fn val(&self) -> Vec<PartialFn> {
        match self {
            Creature::K1(c) => c.val.clone(),
            Creature::K2(c) => c.val.clone(),
            Creature::KN(c) => c.val(),
        }
    }

    /// The integer behind the norm: `|A|`, `|val|` or `m_up`.
    pub fn nor_size(&self) -> u64 {
        match self {
            Creature::K1(c) => c.a.len() as u64,
            Creature::K2(c) => c.val.len() as u64,
            Creature::KN(c) => c.m_up as u64,
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        match self {
            Creature::K1(c) => c.validate(),
            Creature::K2(c) => c.validate(),
            Creature::KN(c) => c.validate(),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Stable 64-bit hash of the creature's content.
    pub fn fingerprint(&self) -> u64 {
        let mut h = Fnv::new();
        match self {
            Creature::K1(c) => {
                h.word(1);
                h.word(c.m_dn);
                h.word(c.m_up);
                h.list(&c.u);
                h.word(c.i);
                h.list(&c.a);
                h.fns(&c.val);
            }
            Creature::K2(c) => {
                h.word(2);
                h.word(c.m_dn);
                h.word(c.m_up);
                h.list(&c.dis);
                h.fns(&c.val);
            }
            Creature::KN(c) => {
                h.word(3);
                h.word(c.n as u32);
                h.word(c.m_dn);
                h.word(c.m_up);
                h.list(&c.x);
                h.list(&c.phi.iter().map(|&v| v as u32).collect::<Vec<_>>());
            }
        }
        h.finish()
    }

    pub fn as_k1(&self) -> Option<&CreatureK1> {
        if let Creature::K1(c) = self { Some(c) } else { None }
    }

    pub fn as_k2(&self) -> Option<&CreatureK2> {
        if let Creature::K2(c) = self { Some(c) } else { None }
    }

    pub fn as_kn(&self) -> Option<&CreatureKN> {
        if let Creature::KN(c) = self { Some(c) } else { None }
    }
}

pub(crate) struct Fnv(u64);

impl Fnv {
    pub(crate) fn new() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }
    pub(crate) fn word(&mut self, w: u32) {
        for b in w.to_le_bytes() {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    fn list(&mut self, xs: &[u32]) {
        self.word(xs.len() as u32);
        xs.iter().for_each(|&x| self.word(x));
    }
    fn fns(&mut self, fs: &[PartialFn]) {
        self.word(fs.len() as u32);
        for f in fs {
            self.word(f.0.len() as u32);
            for &(p, v) in &f.0 {
                self.word(p);
                self.word(v);
            }
        }
    }
    pub(crate) fn finish(&self) -> u64 {
        self.0
    }
}

/// How a composed creature was built from its blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "example"))]
pub enum Choice {
    /// `val` rows pick one function per block, by index into each `val[t_j]`.
    #[cfg_attr(feature = "serde", serde(rename = "2.10"))]
    K1 { l_star: usize, val: Vec<Vec<usize>> },
    /// Indices into `val[t_{l*}]`.
    #[cfg_attr(feature = "serde", serde(rename = "2.11"))]
    K2 { l_star: usize, val: Vec<usize> },
    /// `v` keeps a block, a symbol fills it with that constant.
    #[cfg_attr(feature = "serde", serde(rename = "2.13"))]
    KN { letters: Vec<Letter> },
}

fn same_example(parts: &[Creature]) -> Result<Example> {
    let first = parts.first().ok_or_else(|| Error::InvalidInput("no blocks to compose".into()))?;
    let ex = first.example();
    if parts.iter().any(|c| c.example() != ex) {
        return Err(Error::InvalidInput("blocks from different examples".into()));
    }
    Ok(ex)
}

/// Boundary law between consecutive blocks: equality for tight examples,
/// `<=` for the loose one.
pub fn boundaries_ok(parts: &[Creature]) -> bool {
    let Some(first) = parts.first() else { return true };
    let tight = first.example().is_tight();
    parts.windows(2).all(|w| if tight { w[0].m_up() == w[1].m_dn() } else { w[0].m_up() <= w[1].m_dn() })
}

fn check_parts(parts: &[Creature]) -> Result<Example> {
    let ex = same_example(parts)?;
    if !boundaries_ok(parts) {
        return Err(Error::InvalidInput("blocks do not meet at their boundaries".into()));
    }
    if ex == Example::Ex213 {
        let n = parts[0].as_kn().unwrap().n;
        if parts.iter().any(|c| c.as_kn().unwrap().n != n) {
            return Err(Error::InvalidInput("blocks over different alphabets".into()));
        }
    }
    Ok(ex)
}

/// The member of `Sigma(parts)` selected by `choice`.
pub fn sigma_compose(parts: &[Creature], choice: &Choice) -> Result<Creature> {
    check_parts(parts)?;
    match choice {
        Choice::K1 { l_star, val } => k1::compose(&unwrap_all(parts, Creature::as_k1)?, *l_star, val).map(Creature::K1),
        Choice::K2 { l_star, val } => k2::compose(&unwrap_all(parts, Creature::as_k2)?, *l_star, val).map(Creature::K2),
        Choice::KN { letters } => kn::compose(&unwrap_all(parts, Creature::as_kn)?, letters).map(Creature::KN),
    }
}

fn unwrap_all<'a, T>(parts: &'a [Creature], f: fn(&'a Creature) -> Option<&'a T>) -> Result<Vec<&'a T>> {
    parts.iter().map(|c| f(c).ok_or_else(|| Error::InvalidChoice("choice is for another example".into()))).collect()
}

/// Every member of `Sigma(parts)`, or `GuardExceeded` when there would be
/// more than `guard` of them.
pub fn sigma_enumerate(parts: &[Creature], guard: usize) -> Result<Vec<Creature>> {
    match check_parts(parts)? {
        Example::Ex210 => Ok(k1::enumerate(&unwrap_all(parts, Creature::as_k1)?, guard)?.into_iter().map(Creature::K1).collect()),
        Example::Ex211 => Ok(k2::enumerate(&unwrap_all(parts, Creature::as_k2)?, guard)?.into_iter().map(Creature::K2).collect()),
        Example::Ex213 => Ok(kn::enumerate(&unwrap_all(parts, Creature::as_kn)?, guard)?.into_iter().map(Creature::KN).collect()),
    }
}

/// `|Sigma(parts)|` by closed formula, independent of the enumerator.
pub fn sigma_count(parts: &[Creature]) -> Result<u128> {
    match check_parts(parts)? {
        Example::Ex210 => Ok(k1::count(&unwrap_all(parts, Creature::as_k1)?)),
        Example::Ex211 => Ok(k2::count(&unwrap_all(parts, Creature::as_k2)?)),
        Example::Ex213 => Ok(kn::count(&unwrap_all(parts, Creature::as_kn)?)),
    }
}

/// Whether `c` is a member of `Sigma(parts)`.
pub fn sigma_contains(parts: &[Creature], c: &Creature) -> bool {
    if check_parts(parts).is_err() || c.example() != parts[0].example() {
        return false;
    }
    match c {
        Creature::K1(x) => unwrap_all(parts, Creature::as_k1).is_ok_and(|p| k1::contains(&p, x)),
        Creature::K2(x) => unwrap_all(parts, Creature::as_k2).is_ok_and(|p| k2::contains(&p, x)),
        Creature::KN(x) => unwrap_all(parts, Creature::as_kn).is_ok_and(|p| kn::letters_of(&p, x).is_some()),
    }
}

/// The variable word recording a 2.13 composition: `v` for kept blocks.
pub fn sigma_to_word(parts: &[Creature], c: &Creature) -> Result<VariableWord> {
    check_parts(parts)?;
    let ps = unwrap_all(parts, Creature::as_kn)?;
    let x = c.as_kn().ok_or_else(|| Error::NotInSigma("not a 2.13 creature".into()))?;
    let letters = kn::letters_of(&ps, x).ok_or_else(|| Error::NotInSigma("creature is not a composition of these blocks".into()))?;
    VariableWord::new(ps[0].n, letters)
}

/// Inverse of [`sigma_to_word`].
pub fn word_to_sigma(parts: &[Creature], w: &VariableWord) -> Result<Creature> {
    sigma_compose(parts, &Choice::KN { letters: w.letters().to_vec() })
}

/// A finite prefix `(t_0, ..., t_{k-1})` of a pure candidate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CandidatePrefix {
    pub example: Example,
    pub creatures: Vec<Creature>,
}

impl CandidatePrefix {
    pub fn new(example: Example, creatures: Vec<Creature>) -> Self {
        Self { example, creatures }
    }

    pub fn len(&self) -> usize {
        self.creatures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.creatures.is_empty()
    }

    /// `r_k`: the first `k` creatures.
    pub fn r(&self, k: usize) -> CandidatePrefix {
        CandidatePrefix { example: self.example, creatures: self.creatures[..k.min(self.len())].to_vec() }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, c) in self.creatures.iter().enumerate() {
            if c.example() != self.example {
                out.push(Violation::new("example tag", alloc::format!("creature {i} is from example {}", c.example().name())));
            }
            for v in c.validate() {
                out.push(Violation::new(v.clause, alloc::format!("creature {i}: {}", v.detail)));
            }
        }
        if !boundaries_ok(&self.creatures) {
            out.push(Violation::new("boundary matching", "consecutive creatures do not meet"));
        }
        if self.example == Example::Ex213 {
            let ns: BTreeSet<u8> = self.creatures.iter().filter_map(|c| c.as_kn().map(|k| k.n)).collect();
            if ns.len() > 1 {
                out.push(Violation::new("alphabet", "creatures over different alphabets"));
            }
        }
        out
    }

    /// Which entries satisfy the dense-subspace law of their example
    /// (`R1` for 2.10, `|val| = l + 1` for 2.11, always true for 2.13).
    pub fn dense_flags(&self) -> Vec<bool> {
        self.creatures
            .iter()
            .enumerate()
            .map(|(l, c)| match c {
                Creature::K1(x) => x.is_r1_at(l),
                Creature::K2(x) => x.val.len() == l + 1,
                Creature::KN(_) => true,
            })
            .collect()
    }

    pub fn is_dense(&self) -> bool {
        self.dense_flags().into_iter().all(|b| b)
    }
}

/// `(start, end)` source block range (inclusive) of one composed creature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BlockRange {
    pub start: usize,
    pub end: usize,
}

/// The block partition witnessing `b <=_fin a`, if any.
///
/// Tight examples: block boundaries are forced by the boundary points; the
/// first block may start after `a_0`. Loose example: a block is determined
/// by its first and last source creature plus one chosen `l*`; sources in
/// between are spacing only.
pub fn le_fin_witness(b: &CandidatePrefix, a: &CandidatePrefix) -> Option<Vec<BlockRange>> {
    if b.example != a.example {
        return None;
    }
    if b.is_empty() || a.is_empty() {
        return (b.is_empty() && a.is_empty()).then(Vec::new);
    }
    if b.creatures.last()?.m_up() != a.creatures.last()?.m_up() {
        return None;
    }
    let src = &a.creatures;
    let mut ranges = Vec::with_capacity(b.len());
    let mut next = 0usize;
    for (idx, x) in b.creatures.iter().enumerate() {
        let start = if idx == 0 || !a.example.is_tight() {
            (next..src.len()).find(|&s| src[s].m_dn() == x.m_dn())?
        } else {
            if src.get(next)?.m_dn() != x.m_dn() {
                return None;
            }
            next
        };
        let end = (start..src.len()).find(|&e| src[e].m_up() == x.m_up())?;
        if !sigma_contains(&src[start..=end], x) {
            return None;
        }
        ranges.push(BlockRange { start, end });
        next = end + 1;
    }
    (next == src.len()).then_some(ranges)
}

pub fn le_fin(b: &CandidatePrefix, a: &CandidatePrefix) -> bool {
    le_fin_witness(b, a).is_some()
}

/// `depth_X(u)`: the least `n <= |X|` with `u <=_fin r_n(X)`; `None`
/// stands for the infinity marker within the given prefix.
pub fn depth(u: &CandidatePrefix, x: &CandidatePrefix) -> Option<usize> {
    (0..=x.len()).find(|&n| le_fin(u, &x.r(n)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PosMode {
    /// Unions `f_0 U ... U f_n` with `f_i in val[t_i]`, every `n < len`.
    Tight,
    /// Union of the `val` sets.
    Loose,
}

/// The possibilities readable off a prefix.
pub fn pos_enumerate(prefix: &CandidatePrefix, mode: PosMode, guard: usize) -> Result<BTreeSet<PartialFn>> {
    let mut out = BTreeSet::new();
    match mode {
        PosMode::Loose => {
            for c in &prefix.creatures {
                out.extend(c.val());
                if out.len() > guard {
                    return Err(Error::GuardExceeded { limit: guard });
                }
            }
        }
        PosMode::Tight => {
            let mut layer: Vec<PartialFn> = alloc::vec![PartialFn::default()];
            for c in &prefix.creatures {
                let vals = c.val();
                if layer.len().saturating_mul(vals.len()) > guard {
                    return Err(Error::GuardExceeded { limit: guard });
                }
                layer = layer
                    .iter()
                    .flat_map(|f| vals.iter().filter_map(move |g| f.union(g)))
                    .collect();
                out.extend(layer.iter().cloned());
                if out.len() > guard {
                    return Err(Error::GuardExceeded { limit: guard });
                }
            }
        }
    }
    Ok(out)
}

/// Greedy embedding into the dense subspace: creature `l` of the result
/// has `|A| = l + 1` (2.10) or `|val| = l + 1` (2.11) and is composed from
/// the next consecutive source blocks, with least-index, least-value choices.
pub fn dense_embed(prefix: &CandidatePrefix, target_len: usize) -> Result<(CandidatePrefix, Vec<BlockRange>)> {
    if !prefix.validate().is_empty() {
        return Err(Error::InvalidInput("source prefix is not valid".into()));
    }
    let (creatures, ranges) = match prefix.example {
        Example::Ex210 => {
            let src = unwrap_all(&prefix.creatures, Creature::as_k1)?;
            let (c, r) = k1::dense_embed(&src, target_len)?;
            (c.into_iter().map(Creature::K1).collect(), r)
        }
        Example::Ex211 => {
            let src = unwrap_all(&prefix.creatures, Creature::as_k2)?;
            let (c, r) = k2::dense_embed(&src, target_len)?;
            (c.into_iter().map(Creature::K2).collect(), r)
        }
        Example::Ex213 => return Err(Error::InvalidInput("example 2.13 has no separate dense subspace".into())),
    };
    Ok((CandidatePrefix::new(prefix.example, creatures), ranges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn partial_fn_basics() {
        let f = PartialFn::new(vec![(3, 1), (1, 0)]).unwrap();
        assert_eq!(f.pairs(), &[(1, 0), (3, 1)]);
        assert_eq!(f.get(3), Some(1));
        assert_eq!(f.get(2), None);
        assert!(PartialFn::new(vec![(1, 0), (1, 1)]).is_none());
        let g = PartialFn::new(vec![(5, 2)]).unwrap();
        assert_eq!(f.union(&g).unwrap().pairs().len(), 3);
        assert!(f.union(&f).is_none());
        assert_eq!(f.restrict(2, 4).pairs(), &[(3, 1)]);
    }
}
