//! Example 2.13: colorings move to variable words through `sigma`, and a
//! monochromatic span of words is read back as block compositions.

use alloc::vec::Vec;

use super::{A4Certificate, A4Options, Oracle, StepRecord};
use crate::creature::{sigma_to_word, word_to_sigma, BlockRange, CandidatePrefix, Creature};
use crate::error::{Error, Result};
use crate::hj::{find_mono_span_with, variable_word_pool, Letter, SpanOptions, VariableWord};
use crate::product::odometer_u8;

fn alphabet(s: &[Creature]) -> Result<u8> {
    s.first()
        .and_then(Creature::as_kn)
        .map(|c| c.n)
        .ok_or_else(|| Error::InvalidInput("expected 2.13 creatures".into()))
}

/// The word of an element relative to blocks `k-1..` of `s`.
pub fn encode(s: &[Creature], k: usize, x: &Creature) -> Result<VariableWord> {
    let start = k - 1;
    let end = (start..s.len()).find(|&p| s[p].m_up() == x.m_up()).ok_or_else(|| Error::NotInSigma("no block ends at m_up".into()))?;
    sigma_to_word(&s[start..=end], x)
}

pub fn decode(s: &[Creature], k: usize, w: &VariableWord) -> Result<Creature> {
    let start = k - 1;
    if start + w.len() > s.len() || w.is_empty() {
        return Err(Error::InvalidInput("word longer than the prefix".into()));
    }
    word_to_sigma(&s[start..start + w.len()], w)
}

pub(crate) fn for_each_word(s: &[Creature], k: usize, f: &mut dyn FnMut(VariableWord) -> bool) -> Result<u64> {
    let n = alphabet(s)?;
    let mut count = 0;
    for len in 1..=s.len().saturating_sub(k - 1) {
        let mut digits = alloc::vec![0u8; len];
        loop {
            if digits.contains(&n) {
                let letters = digits.iter().map(|&d| if d == n { Letter::Var } else { Letter::Sym(d) }).collect();
                count += 1;
                if !f(VariableWord::new(n, letters)?) {
                    return Ok(count);
                }
            }
            if !odometer_u8(&mut digits, n + 1) {
                break;
            }
        }
    }
    Ok(count)
}

pub(crate) fn for_each_element(s: &[Creature], k: usize, f: &mut dyn FnMut(&Creature) -> bool) -> Result<u64> {
    let mut err = None;
    let count = for_each_word(s, k, &mut |w| match decode(s, k, &w) {
        Ok(x) => f(&x),
        Err(e) => {
            err = Some(e);
            false
        }
    })?;
    err.map_or(Ok(count), Err)
}

/// Whether the first base block under `x` is kept (letter `v`).
pub(crate) fn first_letter_kept(base: &[Creature], x: &Creature) -> bool {
    let Some(start) = base.iter().position(|b| b.m_dn() == x.m_dn()) else { return false };
    let Some(end) = (start..base.len()).find(|&p| base[p].m_up() == x.m_up()) else { return false };
    sigma_to_word(&base[start..=end], x).is_ok_and(|w| w.letters()[0] == Letter::Var)
}

pub(crate) fn search(
    base: &CandidatePrefix,
    k: usize,
    oracle: Oracle,
    opts: &A4Options,
    sink: &mut dyn FnMut(A4Certificate) -> bool,
) -> Result<()> {
    let t = &base.creatures;
    let n = alphabet(t)?;
    let room = t.len() - (k - 1);
    let pool = variable_word_pool(n, room);
    let word_color = |w: &VariableWord| decode(t, k, w).map_or(0, |x| oracle(&x));
    let span_opts = SpanOptions { allow_repeats: true, max_total_len: Some(room), budget: opts.node_budget };
    let Some(span) = find_mono_span_with(&word_color, &pool, opts.targets, span_opts)? else {
        return Ok(());
    };
    let mut creatures = t[..k - 1].to_vec();
    let mut witness: Vec<BlockRange> = (0..k - 1).map(|p| BlockRange { start: p, end: p }).collect();
    let mut m = k - 1;
    for w in &span.words {
        creatures.push(word_to_sigma(&t[m..m + w.len()], w)?);
        witness.push(BlockRange { start: m, end: m + w.len() - 1 });
        m += w.len();
    }
    sink(A4Certificate {
        example: base.example,
        k,
        depth: t.len(),
        targets: opts.targets,
        prefix: CandidatePrefix::new(base.example, creatures),
        witness,
        color: span.color,
        elements: 0,
        steps: alloc::vec![StepRecord { level: k - 1, l: span.indices.clone(), n: Vec::new(), color: span.color }],
        verified: false,
    });
    Ok(())
}
