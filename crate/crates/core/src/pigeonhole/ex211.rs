//! Example 2.11: elements encoded as `(start, end, l, J)`, homogenized level
//! by level with the varying-index tree search over `K_l = val[t_l]`.

use alloc::vec::Vec;

use super::{A4Certificate, A4Options, Oracle, StepRecord};
use crate::creature::{sigma_compose, BlockRange, CandidatePrefix, Choice, Creature};
use crate::error::{Error, Result};
use crate::subset::{elements, k_subsets};
use crate::tree::{search_varying, Targets, TreeCertificate, VaryingIndexColoring};

/// `x` in `Sigma_2(s_start, ..., s_end)` with `dis` from block `l` and
/// `val` the members of `val[s_l]` at indices `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Code211 {
    pub start: usize,
    pub end: usize,
    pub l: usize,
    pub j: Vec<usize>,
}

pub fn decode(s: &[Creature], k: usize, code: &Code211) -> Result<Creature> {
    if !(k - 1 <= code.start && code.start <= code.l && code.l <= code.end && code.end < s.len()) {
        return Err(Error::InvalidInput("code outside the prefix".into()));
    }
    if code.j.len() != k || code.j.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("code needs k increasing val indices".into()));
    }
    sigma_compose(&s[code.start..=code.end], &Choice::K2 { l_star: code.l - code.start, val: code.j.clone() })
}

pub fn encode(s: &[Creature], k: usize, x: &Creature) -> Option<Code211> {
    let c = x.as_k2()?;
    let start = (k - 1..s.len()).find(|&p| s[p].m_dn() == c.m_dn)?;
    let end = (start..s.len()).find(|&p| s[p].m_up() == c.m_up)?;
    let l = (start..=end).find(|&p| s[p].as_k2().is_some_and(|t| t.dis == c.dis))?;
    let t = s[l].as_k2()?;
    let j: Vec<usize> = c.val.iter().map(|f| t.val.iter().position(|g| g == f)).collect::<Option<_>>()?;
    let code = Code211 { start, end, l, j };
    (decode(s, k, &code).ok()? == *x).then_some(code)
}

pub(crate) fn for_each_code(s: &[Creature], k: usize, f: &mut dyn FnMut(Code211) -> bool) -> Result<u64> {
    let mut count = 0u64;
    for start in k - 1..s.len() {
        for end in start..s.len() {
            for (l, c) in s.iter().enumerate().take(end + 1).skip(start) {
                let size = c.as_k2().ok_or_else(|| Error::InvalidInput("expected 2.11 creatures".into()))?.val.len();
                if size > 64 || size < k {
                    continue;
                }
                for mask in k_subsets(size as u32, k as u32) {
                    count += 1;
                    let j = elements(mask).into_iter().map(|e| e as usize).collect();
                    if !f(Code211 { start, end, l, j }) {
                        return Ok(count);
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

/// Colors of elements starting at block `j` of `cur`; `J` alone matters,
/// so side coordinates are unused.
struct Reduction<'a> {
    cur: &'a [Creature],
    k: usize,
    j: usize,
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
    fn color(&self, n: usize, l: usize, subset: u64, _xs: &[u32]) -> u8 {
        let j = elements(subset).into_iter().map(|e| e as usize).collect();
        let code = Code211 { start: self.j, end: self.j + n, l: self.j + l, j };
        decode(self.cur, self.k, &code).map_or(0, |x| (self.oracle)(&x))
    }
    fn uses_side_coordinates(&self) -> bool {
        false
    }
}

struct Fusion<'a, 's> {
    base: &'a CandidatePrefix,
    k: usize,
    levels: usize,
    oracle: Oracle<'a>,
    opts: &'a A4Options,
    visits: u64,
    exhausted: bool,
    failure: Option<Error>,
    sink: &'s mut dyn FnMut(A4Certificate) -> bool,
}

/// `t^j`: blocks below `j` kept, block `j + p` composed from
/// `cur[n_{p-1} + 1 ..= n_p]` with `dis` from `l_p` and `val = H_{l_p}`.
fn rebuild(cur: &[Creature], origins: &[BlockRange], j: usize, cert: &TreeCertificate) -> Result<(Vec<Creature>, Vec<BlockRange>)> {
    let mut out = cur[..j].to_vec();
    let mut orig = origins[..j].to_vec();
    let mut start = 0;
    for (&l, &n) in cert.l.iter().zip(&cert.n) {
        let val = cert.h[l].iter().map(|&h| h as usize).collect();
        out.push(sigma_compose(&cur[j + start..=j + n], &Choice::K2 { l_star: l - start, val })?);
        orig.push(BlockRange { start: origins[j + start].start, end: origins[j + n].end });
        start = n + 1;
    }
    Ok((out, orig))
}

impl Fusion<'_, '_> {
    // Returns true to stop the whole search.
    fn level(&mut self, j: usize, cur: &[Creature], origins: &[BlockRange], steps: &mut Vec<StepRecord>) -> bool {
        let last = self.k - 1 + self.levels;
        if j == last {
            return self.finish(cur, origins, steps);
        }
        let rest = last - j;
        let sizes: Vec<u32> = cur[j..].iter().map(|c| c.as_k2().map_or(0, |t| t.val.len() as u32)).collect();
        if sizes.len() < rest {
            return false;
        }
        let red = Reduction { cur, k: self.k, j, sizes, oracle: self.oracle };
        let ms: Vec<u32> = (0..rest).map(|q| (j + 1 + q) as u32).collect();
        let res = search_varying(&ms, &red, Targets { l: rest, n: rest }, self.opts.node_budget, &mut |cert| {
            self.visits += 1;
            if self.visits > self.opts.visit_budget {
                self.exhausted = true;
                return true;
            }
            let (next, orig) = match rebuild(cur, origins, j, cert) {
                Ok(v) => v,
                Err(e) => {
                    self.failure = Some(e);
                    return true;
                }
            };
            steps.push(StepRecord { level: j, l: cert.l.clone(), n: cert.n.clone(), color: cert.color });
            let stop = self.level(j + 1, &next, &orig, steps);
            steps.pop();
            stop
        });
        match res {
            Ok(Some(_)) => true,
            Ok(None) => self.failure.is_some() || self.visits > self.opts.visit_budget,
            Err(Error::NotFoundWithinDepth { budget_exhausted: true, .. }) => {
                self.exhausted = true;
                false
            }
            Err(e) => {
                self.failure = Some(e);
                true
            }
        }
    }

    fn finish(&mut self, cur: &[Creature], origins: &[BlockRange], steps: &[StepRecord]) -> bool {
        let t = self.opts.targets;
        let base = self.k - 1;
        let pick = |c: u8| -> Option<Vec<usize>> {
            let idx: Vec<usize> = steps.iter().enumerate().filter(|(_, s)| s.color == c).map(|(i, _)| i).collect();
            (idx.len() >= t).then(|| idx[..t].to_vec())
        };
        let (color, idx) = match (pick(0), pick(1)) {
            (Some(a), Some(b)) => if a[t - 1] <= b[t - 1] { (0, a) } else { (1, b) },
            (Some(a), None) => (0, a),
            (None, Some(b)) => (1, b),
            (None, None) => return false,
        };
        let mut creatures = cur[..base].to_vec();
        let mut witness = origins[..base].to_vec();
        for (i, &lv) in idx.iter().enumerate() {
            let from = base + lv;
            let to = idx.get(i + 1).map_or(cur.len(), |&nx| base + nx);
            let val = (0..=base + i).collect();
            match sigma_compose(&cur[from..to], &Choice::K2 { l_star: 0, val }) {
                Ok(c) => creatures.push(c),
                Err(_) => return false,
            }
            witness.push(BlockRange { start: origins[from].start, end: origins[to - 1].end });
        }
        (self.sink)(A4Certificate {
            example: self.base.example,
            k: self.k,
            depth: self.base.len(),
            targets: t,
            prefix: CandidatePrefix::new(self.base.example, creatures),
            witness,
            color,
            elements: 0,
            steps: steps.to_vec(),
            verified: false,
        })
    }
}

pub(crate) fn search(
    base: &CandidatePrefix,
    k: usize,
    oracle: Oracle,
    opts: &A4Options,
    sink: &mut dyn FnMut(A4Certificate) -> bool,
) -> Result<()> {
    let levels = opts.levels.unwrap_or(opts.targets).max(opts.targets);
    let mut f = Fusion { base, k, levels, oracle, opts, visits: 0, exhausted: false, failure: None, sink };
    let origins: Vec<BlockRange> = (0..base.len()).map(|p| BlockRange { start: p, end: p }).collect();
    let done = f.level(k - 1, &base.creatures, &origins, &mut Vec::new());
    if let Some(e) = f.failure {
        return Err(e);
    }
    if !done && (f.exhausted || f.visits > opts.visit_budget) {
        return Err(Error::NotFoundWithinDepth { depth: base.len(), budget_exhausted: true });
    }
    Ok(())
}
