//! Fusion of per-level A.4 steps and the recoveries of the possibility
//! colorings from them.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{a4_visit, check_witness, for_each_element, A4Options, Oracle};
use crate::creature::{pos_enumerate, sigma_compose, BlockRange, CandidatePrefix, Choice, Creature, CreatureK1, Example, PartialFn, PosMode};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FusionResult {
    pub example: Example,
    pub prefix: CandidatePrefix,
    pub witness: Vec<BlockRange>,
    /// Constant color of level `k` on `r_{k+1}[k, prefix]`.
    pub colors: Vec<u8>,
}

struct Ctx {
    levels: usize,
    budget: usize,
    opts: A4Options,
    tried: u64,
    deepest: (usize, String),
}

fn compose_ranges(inner: &[BlockRange], outer: &[BlockRange]) -> Vec<BlockRange> {
    inner.iter().map(|r| BlockRange { start: outer[r.start].start, end: outer[r.end].end }).collect()
}

fn step(ctx: &mut Ctx, colorings: &[Oracle], k: usize, cur: &CandidatePrefix, origins: &[BlockRange], colors: &mut Vec<u8>) -> Result<Option<FusionResult>> {
    if k == ctx.levels {
        return Ok(Some(FusionResult {
            example: cur.example,
            prefix: cur.r(k),
            witness: origins[..k].to_vec(),
            colors: colors.clone(),
        }));
    }
    if k >= ctx.budget {
        return Err(Error::FusionAborted { step: k, reason: "step budget exhausted".into() });
    }
    let opts = A4Options { targets: ctx.levels - k, ..ctx.opts };
    let mut out = None;
    let mut err = None;
    let res = a4_visit(cur, k + 1, colorings[k], &opts, &mut |cert| {
        ctx.tried += 1;
        if ctx.tried > ctx.opts.visit_budget {
            err = Some(Error::FusionAborted { step: k, reason: "visit budget exhausted".into() });
            return true;
        }
        let origins_next = compose_ranges(&cert.witness, origins);
        colors.push(cert.color);
        match step(ctx, colorings, k + 1, &cert.prefix, &origins_next, colors) {
            Ok(Some(r)) => {
                out = Some(r);
                true
            }
            Ok(None) => {
                colors.pop();
                false
            }
            Err(e) => {
                err = Some(e);
                true
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    match res {
        Ok(_) if out.is_some() => Ok(out),
        Ok(_) => {
            if k >= ctx.deepest.0 {
                ctx.deepest = (k, "no homogeneous extension within depth".into());
            }
            Ok(None)
        }
        Err(e) => {
            if k >= ctx.deepest.0 {
                ctx.deepest = (k, e.to_string());
            }
            Ok(None)
        }
    }
}

/// Runs A.4 at level `k + 1` with `colorings[k]` for every `k`, each step on
/// the previous step's output, backtracking when a later step fails.
/// `budget` bounds the number of steps attempted.
pub fn fusion(base: &CandidatePrefix, colorings: &[Oracle], budget: usize, opts: &A4Options) -> Result<FusionResult> {
    if colorings.is_empty() {
        return Err(Error::InvalidInput("fusion needs at least one coloring".into()));
    }
    let mut ctx = Ctx { levels: colorings.len(), budget, opts: *opts, tried: 0, deepest: (0, String::new()) };
    let origins: Vec<BlockRange> = (0..base.len()).map(|p| BlockRange { start: p, end: p }).collect();
    match step(&mut ctx, colorings, 0, base, &origins, &mut Vec::new())? {
        Some(r) => Ok(r),
        None => Err(Error::FusionAborted { step: ctx.deepest.0, reason: ctx.deepest.1 }),
    }
}

/// Level-by-level re-verification of a fusion result against `base`.
pub fn verify_fusion(base: &CandidatePrefix, res: &FusionResult, colorings: &[Oracle]) -> core::result::Result<u64, String> {
    if res.prefix.len() != colorings.len() || res.colors.len() != colorings.len() {
        return Err("one level per coloring is required".into());
    }
    if let Some(v) = res.prefix.validate().first() {
        return Err(format!("invalid prefix: {}", v.detail));
    }
    if !res.prefix.is_dense() {
        return Err("prefix is not in the dense subspace".into());
    }
    check_witness(base, &res.prefix, &res.witness)?;
    let mut total = 0;
    for (k, (c, &want)) in colorings.iter().zip(&res.colors).enumerate() {
        let mut ok = true;
        total += for_each_element(&res.prefix, k + 1, &mut |x| {
            ok = c(x) == want;
            ok
        })
        .map_err(|e| e.to_string())?;
        if !ok {
            return Err(format!("level {k} is not constant"));
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Variant {
    /// Per-level constancy on the tail possibilities.
    A,
    /// One color on all possibilities.
    B,
}

/// A coloring of possibilities; the first argument is the base block where
/// the possibility starts.
pub type PosColoring<'a> = &'a dyn Fn(usize, &PartialFn) -> u8;

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Recovery {
    pub example: Example,
    pub variant: Variant,
    pub prefix: CandidatePrefix,
    pub witness: Vec<BlockRange>,
    /// One color (variant B) or one per creature of `prefix` (variant A).
    pub colors: Vec<u8>,
    /// Possibilities or elements checked.
    pub checked: u64,
    pub verified: bool,
}

fn start_block(base: &CandidatePrefix, dn: u32) -> usize {
    base.creatures.iter().position(|c| c.m_dn() == dn).unwrap_or(usize::MAX)
}

fn single_val(x: &Creature) -> Option<PartialFn> {
    let v = x.val();
    (v.len() == 1).then(|| v[0].clone())
}

fn min_fn(x: &Creature) -> Option<PartialFn> {
    x.as_k1()?.min_creature().ok()?.val.into_iter().next()
}

/// The member of `Sigma_1*(parts)` with `i` and `A` from the last block
/// (`A` cut to its `size` least values) and the least side value elsewhere.
fn collapse_k1(parts: &[Creature], size: usize) -> Result<Creature> {
    let ts: Vec<&CreatureK1> = parts.iter().filter_map(Creature::as_k1).collect();
    let last = ts.len() - 1;
    let index = |t: &CreatureK1, a: u32| t.val.iter().position(|f| f.get(t.i) == Some(a)).ok_or(Error::InsufficientMaterial { index: 0 });
    let fixed = ts.iter().map(|t| index(t, t.a[0])).collect::<Result<Vec<_>>>()?;
    let top = ts[last];
    if top.a.len() < size {
        return Err(Error::InsufficientMaterial { index: last });
    }
    let rows = top.a[..size]
        .iter()
        .map(|&a| {
            let mut row = fixed.clone();
            row[last] = index(top, a)?;
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    sigma_compose(parts, &Choice::K1 { l_star: last, val: rows })
}

/// Builds the derived creature colorings from `d`, runs the matching A.4 or
/// fusion operation and reads off a prefix on which `d` behaves as the
/// conclusion requires. `length` is the number of creatures wanted.
pub fn recover_conclusion(base: &CandidatePrefix, d: PosColoring, variant: Variant, length: usize, opts: &A4Options) -> Result<Recovery> {
    if length == 0 {
        return Err(Error::InvalidInput("length must be at least 1".into()));
    }
    let c = |x: &Creature| single_val(x).map_or(0, |f| d(start_block(base, x.m_dn()), &f));
    let (prefix, witness) = match (base.example, variant) {
        (Example::Ex211, Variant::B) => {
            let cert = super::a4(base, 1, &c, &A4Options { targets: length, ..*opts })?;
            (cert.prefix, cert.witness)
        }
        (Example::Ex210, Variant::B) => {
            let levels = opts.levels.unwrap_or(2 * length + 1);
            let ck = |x: &Creature| min_fn(x).map_or(0, |f| d(start_block(base, x.m_dn()), &f));
            let colorings: Vec<Oracle> = (0..levels).map(|_| &ck as Oracle).collect();
            let fused = fusion(base, &colorings, levels, opts)?;
            let ks = select_levels(&fused.colors, length).ok_or(Error::NotFoundWithinDepth { depth: base.len(), budget_exhausted: false })?;
            let s = &fused.prefix.creatures;
            let mut out = Vec::with_capacity(length);
            let mut ranges = Vec::with_capacity(length);
            for j in 0..length {
                out.push(collapse_k1(&s[ks[j]..ks[j + 1]], j + 1)?);
                ranges.push(BlockRange { start: fused.witness[ks[j]].start, end: fused.witness[ks[j + 1] - 1].end });
            }
            (CandidatePrefix::new(base.example, out), ranges)
        }
        (Example::Ex210, Variant::A) => {
            let levels = 2 * length - 1;
            let ck = |x: &Creature| min_fn(x).map_or(0, |f| d(start_block(base, x.m_dn()), &f));
            let colorings: Vec<Oracle> = (0..levels).map(|_| &ck as Oracle).collect();
            let fused = fusion(base, &colorings, levels, opts)?;
            let s = &fused.prefix.creatures;
            let mut out = alloc::vec![s[0].clone()];
            let mut ranges = alloc::vec![fused.witness[0]];
            for n in 1..length {
                out.push(collapse_k1(&s[2 * n - 1..=2 * n], n + 1)?);
                ranges.push(BlockRange { start: fused.witness[2 * n - 1].start, end: fused.witness[2 * n].end });
            }
            (CandidatePrefix::new(base.example, out), ranges)
        }
        (Example::Ex211, Variant::A) => return Err(Error::InvalidInput("variant a is defined for example 2.10 only".into())),
        (Example::Ex213, _) => return Err(Error::InvalidInput("example 2.13 has no recovery through A.4".into())),
    };
    let mut rec = Recovery { example: base.example, variant, prefix, witness, colors: Vec::new(), checked: 0, verified: false };
    rec.colors = observed_colors(base, &rec, d).map_err(Error::InternalContradiction)?;
    rec.checked = verify_recovery(base, &rec, d).map_err(Error::InternalContradiction)?;
    rec.verified = true;
    Ok(rec)
}

/// Least `k_0 < k_1 < ... < k_length` with `k_j >= 2j + 1`, the first
/// `length` sharing one color and `k_length` a plain boundary.
fn select_levels(colors: &[u8], length: usize) -> Option<Vec<usize>> {
    let mut best: Option<Vec<usize>> = None;
    for c in [0u8, 1] {
        let mut ks = Vec::with_capacity(length + 1);
        let mut next = 1;
        for j in 0..length {
            let from = next.max(2 * j + 1);
            let Some(k) = (from..colors.len()).find(|&k| colors[k] == c) else { break };
            ks.push(k);
            next = k + 1;
        }
        if ks.len() < length {
            continue;
        }
        let end = next.max(2 * length + 1);
        if end > colors.len() {
            continue;
        }
        ks.push(end);
        if best.as_ref().is_none_or(|b| ks < *b) {
            best = Some(ks);
        }
    }
    best
}

fn pos_colors(base: &CandidatePrefix, rec: &Recovery, d: PosColoring) -> core::result::Result<Vec<Vec<u8>>, String> {
    let s = &rec.prefix;
    match (rec.example, rec.variant) {
        (Example::Ex211, Variant::B) => {
            let mut seen = Vec::new();
            for c in &s.creatures {
                let k = start_block(base, c.m_dn());
                for f in c.val() {
                    seen.push(d(k, &f));
                }
            }
            Ok(alloc::vec![seen])
        }
        (Example::Ex210, Variant::B) => {
            let mut seen = Vec::new();
            for_each_element(s, 1, &mut |x| {
                if let Some(f) = single_val(x) {
                    seen.push(d(start_block(base, x.m_dn()), &f));
                }
                true
            })
            .map_err(|e| e.to_string())?;
            Ok(alloc::vec![seen])
        }
        (Example::Ex210, Variant::A) => (0..s.len())
            .map(|i| {
                let k = start_block(base, s.creatures[i].m_dn());
                let tail = CandidatePrefix::new(s.example, s.creatures[i..].to_vec());
                let pos = pos_enumerate(&tail, PosMode::Tight, crate::creature::SIGMA_GUARD).map_err(|e| e.to_string())?;
                Ok(pos.iter().map(|f| d(k, f)).collect())
            })
            .collect(),
        _ => Err("unsupported example and variant".into()),
    }
}

fn observed_colors(base: &CandidatePrefix, rec: &Recovery, d: PosColoring) -> core::result::Result<Vec<u8>, String> {
    pos_colors(base, rec, d)?.iter().map(|v| v.first().copied().ok_or_else(|| "nothing to color".into())).collect()
}

/// Re-enumerates the truncated possibilities of a recovery and checks the
/// stated colors, plus the block witness against `base`.
pub fn verify_recovery(base: &CandidatePrefix, rec: &Recovery, d: PosColoring) -> core::result::Result<u64, String> {
    if let Some(v) = rec.prefix.validate().first() {
        return Err(format!("invalid prefix: {}", v.detail));
    }
    if !rec.prefix.is_dense() {
        return Err("prefix is not in the dense subspace".into());
    }
    check_witness(base, &rec.prefix, &rec.witness)?;
    let groups = pos_colors(base, rec, d)?;
    if groups.len() != rec.colors.len() {
        return Err("one color per group is required".into());
    }
    let mut count = 0;
    for (i, (g, &want)) in groups.iter().zip(&rec.colors).enumerate() {
        if let Some(bad) = g.iter().position(|&c| c != want) {
            return Err(format!("group {i}: possibility {bad} has another color"));
        }
        count += g.len() as u64;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{dense_prefix, SeededColoring};

    fn least_point_value(_: usize, f: &PartialFn) -> u8 {
        (f.pairs()[0].1 & 1) as u8
    }

    #[test]
    fn two_step_fusion_on_2_11() {
        for seed in 0..5 {
            let base = dense_prefix(Example::Ex211, 8, seed);
            let (c0, c1) = (SeededColoring(seed), SeededColoring(seed + 100));
            let f0 = |x: &Creature| c0.color(x);
            let f1 = |x: &Creature| c1.color(x);
            let cs: [Oracle; 2] = [&f0, &f1];
            let res = fusion(&base, &cs, 2, &A4Options::default()).unwrap();
            assert!(verify_fusion(&base, &res, &cs).is_ok());
        }
    }

    #[test]
    fn zero_budget_aborts() {
        let base = dense_prefix(Example::Ex211, 6, 0);
        let f = |_: &Creature| 0u8;
        let r = fusion(&base, &[&f as Oracle], 0, &A4Options::default());
        assert!(matches!(r, Err(Error::FusionAborted { step: 0, .. })));
    }

    #[test]
    fn recovery_b_on_2_11() {
        for seed in 0..5 {
            let base = dense_prefix(Example::Ex211, 8, seed);
            let rec = recover_conclusion(&base, &least_point_value, Variant::B, 3, &A4Options::default()).unwrap();
            assert_eq!(rec.colors.len(), 1);
            assert!(verify_recovery(&base, &rec, &least_point_value).is_ok());
        }
    }

    #[test]
    fn recovery_a_on_2_10() {
        let base = dense_prefix(Example::Ex210, 8, 3);
        let d = |k: usize, f: &PartialFn| ((k + f.pairs().len()) & 1) as u8;
        let rec = recover_conclusion(&base, &d, Variant::A, 2, &A4Options::default()).unwrap();
        assert_eq!(rec.colors.len(), 2);
        assert!(verify_recovery(&base, &rec, &d).is_ok());
        let mut bad = rec.clone();
        bad.colors[1] ^= 1;
        assert!(verify_recovery(&base, &bad, &d).is_err());
    }

    #[test]
    fn recovery_b_on_2_10_constant() {
        let base = dense_prefix(Example::Ex210, 6, 1);
        let d = |_: usize, _: &PartialFn| 1u8;
        let rec = recover_conclusion(&base, &d, Variant::B, 1, &A4Options::default()).unwrap();
        assert_eq!(rec.colors, alloc::vec![1]);
    }

    #[test]
    fn level_selection_respects_spacing() {
        assert_eq!(select_levels(&[0, 0, 0, 0], 1), Some(alloc::vec![1, 3]));
        assert_eq!(select_levels(&[0, 1, 1, 1, 0, 0], 2), Some(alloc::vec![1, 3, 5]));
        assert_eq!(select_levels(&[0, 0], 1), None);
    }
}
