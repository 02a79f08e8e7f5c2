//! Example 2.10: elements of `r_k[k-1, t]` encoded as `(n, l, A, (a_j))` and
//! homogenized with the varying-index tree search.

use alloc::format;
use alloc::vec::Vec;

use super::{A4Certificate, A4Options, Oracle, StepRecord};
use crate::creature::{sigma_compose, BlockRange, CandidatePrefix, Choice, Creature, CreatureK1};
use crate::error::{Error, Result};
use crate::product::odometer;
use crate::subset::{elements, k_subsets};
use crate::tree::{search_varying, Targets, TreeCertificate, VaryingIndexColoring};

/// `x` composed over blocks `k-1..=n` with `i` from block `l`, `A` the
/// chosen values there and uniform side values `a_j` on the other blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Code210 {
    pub n: usize,
    pub l: usize,
    pub a: Vec<u32>,
    pub side: Vec<u32>,
}

fn k1s(s: &[Creature]) -> Result<Vec<&CreatureK1>> {
    s.iter().map(|c| c.as_k1().ok_or_else(|| Error::InvalidInput("expected 2.10 creatures".into()))).collect()
}

fn fn_index(t: &CreatureK1, a: u32) -> Result<usize> {
    let mut hits = t.val.iter().enumerate().filter(|(_, f)| f.get(t.i) == Some(a));
    match (hits.next(), hits.next()) {
        (Some((ix, _)), None) => Ok(ix),
        _ => Err(Error::InvalidInput(format!("no unique function with value {a} at i = {}", t.i))),
    }
}

pub fn decode(s: &[Creature], k: usize, code: &Code210) -> Result<Creature> {
    let base = k - 1;
    if !(base <= code.l && code.l <= code.n && code.n < s.len()) {
        return Err(Error::InvalidInput("code outside the prefix".into()));
    }
    if code.a.len() != k || code.side.len() != code.n - base {
        return Err(Error::InvalidInput("code has the wrong arity".into()));
    }
    let ts = k1s(&s[base..=code.n])?;
    let mut side = code.side.iter();
    let fixed: Vec<Option<usize>> = (base..=code.n)
        .map(|j| if j == code.l { Ok(None) } else { fn_index(ts[j - base], *side.next().unwrap()).map(Some) })
        .collect::<Result<_>>()?;
    let rows = code
        .a
        .iter()
        .map(|&a| {
            let head = fn_index(ts[code.l - base], a)?;
            Ok(fixed.iter().map(|f| f.unwrap_or(head)).collect())
        })
        .collect::<Result<Vec<Vec<usize>>>>()?;
    sigma_compose(&s[base..=code.n], &Choice::K1 { l_star: code.l - base, val: rows })
}

/// The code of an element, if `x` lies in the encoded range.
pub fn encode(s: &[Creature], k: usize, x: &Creature) -> Option<Code210> {
    let base = k - 1;
    let c = x.as_k1()?;
    if s.get(base)?.m_dn() != c.m_dn || c.a.len() != k {
        return None;
    }
    let n = (base..s.len()).find(|&j| s[j].m_up() == c.m_up)?;
    let ts = k1s(&s[base..=n]).ok()?;
    let l = base + ts.iter().position(|t| t.i == c.i)?;
    let mut side = Vec::new();
    for (j, t) in ts.iter().enumerate() {
        if base + j == l {
            continue;
        }
        let mut vals = c.val.iter().map(|f| f.get(t.i));
        let first = vals.next()??;
        if vals.any(|v| v != Some(first)) {
            return None;
        }
        side.push(first);
    }
    let code = Code210 { n, l, a: c.a.clone(), side };
    (decode(s, k, &code).ok()? == *x).then_some(code)
}

pub(crate) fn for_each_code(s: &[Creature], k: usize, f: &mut dyn FnMut(Code210) -> bool) -> Result<u64> {
    let ts = k1s(s)?;
    let base = k - 1;
    let mut count = 0u64;
    for n in base..ts.len() {
        for l in base..=n {
            let a_l = &ts[l].a;
            if a_l.len() > 64 || a_l.len() < k {
                continue;
            }
            let sides: Vec<usize> = (base..=n).filter(|&j| j != l).collect();
            for mask in k_subsets(a_l.len() as u32, k as u32) {
                let a: Vec<u32> = elements(mask).into_iter().map(|e| a_l[e as usize]).collect();
                let mut digits = alloc::vec![0u32; sides.len()];
                loop {
                    let side = sides.iter().zip(&digits).map(|(&j, &d)| ts[j].a[d as usize]).collect();
                    count += 1;
                    if !f(Code210 { n, l, a: a.clone(), side }) {
                        return Ok(count);
                    }
                    if !odometer(&mut digits, |q| ts[sides[q]].a.len() as u32) {
                        break;
                    }
                }
            }
        }
    }
    Ok(count)
}

pub(crate) fn for_each_element(s: &[Creature], k: usize, f: &mut dyn FnMut(&Creature) -> bool) -> Result<u64> {
    let mut err = None;
    let count = for_each_code(s, k, &mut |code| match decode(s, k, &code) {
        Ok(x) => f(&x),
        Err(e) => {
            err = Some(e);
            false
        }
    })?;
    err.map_or(Ok(count), Err)
}

struct Reduction<'a> {
    s: &'a [Creature],
    ts: Vec<&'a CreatureK1>,
    k: usize,
    sizes: Vec<u32>,
    oracle: Oracle<'a>,
}

impl VaryingIndexColoring for Reduction<'_> {
    fn k(&self) -> u32 {
        self.k as u32
    }
    fn sizes(&self) -> &[u32] {
        &self.sizes
    }
    fn color(&self, n: usize, l: usize, subset: u64, xs: &[u32]) -> u8 {
        let base = self.k - 1;
        let a_l = &self.ts[base + l].a;
        let a = elements(subset).into_iter().map(|e| a_l[e as usize]).collect();
        let others = (0..=n).filter(|&j| j != l);
        let side = others.zip(xs).map(|(j, &x)| self.ts[base + j].a[x as usize]).collect();
        let code = Code210 { n: base + n, l: base + l, a, side };
        decode(self.s, self.k, &code).map_or(0, |x| (self.oracle)(&x))
    }
}

/// Rebuilds `s` from a tree certificate over the coordinates `k-1..` of `t`.
pub(crate) fn rebuild(t: &[Creature], k: usize, cert: &TreeCertificate) -> Result<(Vec<Creature>, Vec<BlockRange>)> {
    let base = k - 1;
    let ts = k1s(t)?;
    let mut out: Vec<Creature> = t[..base].to_vec();
    let mut ranges: Vec<BlockRange> = (0..base).map(|p| BlockRange { start: p, end: p }).collect();
    let mut start = 0;
    for (&l, &n) in cert.l.iter().zip(&cert.n) {
        let top = ts[base + l];
        let fixed: Vec<usize> = (start..=n)
            .map(|j| if j == l { Ok(0) } else { fn_index(ts[base + j], ts[base + j].a[cert.h[j][0] as usize]) })
            .collect::<Result<_>>()?;
        let rows = cert.h[l]
            .iter()
            .map(|&h| {
                let head = fn_index(top, top.a[h as usize])?;
                let mut row = fixed.clone();
                row[l - start] = head;
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(sigma_compose(&t[base + start..=base + n], &Choice::K1 { l_star: l - start, val: rows })?);
        ranges.push(BlockRange { start: base + start, end: base + n });
        start = n + 1;
    }
    Ok((out, ranges))
}

pub(crate) fn search(
    base: &CandidatePrefix,
    k: usize,
    oracle: Oracle,
    opts: &A4Options,
    sink: &mut dyn FnMut(A4Certificate) -> bool,
) -> Result<()> {
    let t = &base.creatures;
    let ts = k1s(t)?;
    let sizes: Vec<u32> = ts[k - 1..].iter().map(|c| c.a.len() as u32).collect();
    if sizes.iter().any(|&s| s > 64) {
        return Err(Error::InvalidInput("A sets above 64 points".into()));
    }
    let red = Reduction { s: t, ts, k, sizes, oracle };
    let ms: Vec<u32> = (0..opts.targets).map(|q| (k + q) as u32).collect();
    let targets = Targets { l: opts.targets, n: opts.targets };
    let mut visits = 0u64;
    let mut failure = None;
    let res = search_varying(&ms, &red, targets, opts.node_budget, &mut |cert| {
        visits += 1;
        if visits > opts.visit_budget {
            failure = Some(Error::NotFoundWithinDepth { depth: t.len(), budget_exhausted: true });
            return true;
        }
        let (creatures, witness) = match rebuild(t, k, cert) {
            Ok(v) => v,
            Err(e) => {
                failure = Some(e);
                return true;
            }
        };
        sink(A4Certificate {
            example: base.example,
            k,
            depth: t.len(),
            targets: opts.targets,
            prefix: CandidatePrefix::new(base.example, creatures),
            witness,
            color: cert.color,
            elements: 0,
            steps: alloc::vec![StepRecord { level: k - 1, l: cert.l.clone(), n: cert.n.clone(), color: cert.color }],
            verified: false,
        })
    });
    if let Some(e) = failure {
        return Err(e);
    }
    res.map(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pigeonhole::{a4, verify_a4};
    use crate::sample::dense_prefix;
    use crate::creature::Example;
    use alloc::collections::BTreeSet;

    #[test]
    fn codes_round_trip() {
        for seed in 0..5 {
            let t = dense_prefix(Example::Ex210, 5, seed);
            for k in 1..=3 {
                let mut seen = BTreeSet::new();
                for_each_code(&t.creatures, k, &mut |code| {
                    let x = decode(&t.creatures, k, &code).unwrap();
                    assert!(x.is_valid());
                    assert_eq!(encode(&t.creatures, k, &x), Some(code));
                    assert!(seen.insert(x.fingerprint()));
                    true
                })
                .unwrap();
            }
        }
    }

    #[test]
    fn parity_of_a_is_confined() {
        let base = dense_prefix(Example::Ex210, 6, 11);
        let c = |x: &Creature| (x.as_k1().unwrap().a[0] & 1) as u8;
        let cert = a4(&base, 1, &c, &A4Options::default()).unwrap();
        assert!(verify_a4(&base, &cert, &c).is_ok());
        for s in &cert.prefix.creatures {
            assert!(s.as_k1().unwrap().a.iter().all(|&a| (a & 1) as u8 == cert.color));
        }
    }

    #[test]
    fn level_two_with_seeded_coloring() {
        let base = dense_prefix(Example::Ex210, 5, 2);
        let col = crate::sample::SeededColoring(5);
        let c = |x: &Creature| col.color(x);
        let opts = A4Options { targets: 1, ..A4Options::default() };
        let cert = a4(&base, 2, &c, &opts).unwrap();
        assert_eq!(cert.prefix.creatures[0], base.creatures[0]);
        assert!(verify_a4(&base, &cert, &c).is_ok());
    }
}
