//! Finite-fragment checks of the axioms A.1 to A.3 and batch A.4 evidence.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::index;
use rand::Rng;

use crate::creature::{
    depth, le_fin, sigma_compose, sigma_contains, sigma_count, sigma_enumerate, BlockRange, CandidatePrefix, Choice, Creature, Example, Violation,
    SIGMA_GUARD,
};
use crate::error::Result;
use crate::hj::Letter;
use crate::pigeonhole::{a4, verify_a4, A4Certificate, A4Options};
use crate::sample::{dense_prefix, rng, SeededColoring};

/// `prefix` claimed to be `r_n` of sample prefix `source` (0 = x, 1 = y, 2 = z).
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ApproxRecord {
    pub source: usize,
    pub n: usize,
    pub prefix: CandidatePrefix,
}

/// A seeded fragment: `z <= y <= x` with block witnesses, plus the
/// approximations of all three.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FragmentSample {
    pub example: Example,
    pub seed: u64,
    pub x: CandidatePrefix,
    pub y: CandidatePrefix,
    pub y_witness: Vec<BlockRange>,
    pub z: CandidatePrefix,
    pub z_witness: Vec<BlockRange>,
    pub approximations: Vec<ApproxRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AxiomReport {
    pub axiom: String,
    pub example: Example,
    pub seed: u64,
    pub checks: u64,
    pub violations: Vec<Violation>,
    pub notices: Vec<String>,
}

impl AxiomReport {
    fn new(axiom: &str, s: &FragmentSample) -> Self {
        Self { axiom: axiom.to_string(), example: s.example, seed: s.seed, checks: 0, violations: Vec::new(), notices: Vec::new() }
    }

    fn check(&mut self, ok: bool, clause: &'static str, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(Violation::new(clause, detail()));
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The single-block member of `Sigma(c)` obeying the dense law at position
/// `p`, with least values.
pub fn thin(c: &Creature, p: usize) -> Option<Creature> {
    let choice = match c {
        Creature::K1(t) => {
            let rows = t.a.get(..p + 1)?.iter().map(|&a| t.val.iter().position(|f| f.get(t.i) == Some(a)).map(|ix| alloc::vec![ix])).collect::<Option<_>>()?;
            Choice::K1 { l_star: 0, val: rows }
        }
        Creature::K2(t) => {
            if t.val.len() <= p {
                return None;
            }
            Choice::K2 { l_star: 0, val: (0..=p).collect() }
        }
        Creature::KN(_) => Choice::KN { letters: alloc::vec![Letter::Var] },
    };
    sigma_compose(core::slice::from_ref(c), &choice).ok()
}

/// A random dense-law member of `Sigma(parts)` at position `p`.
fn random_member(parts: &[Creature], p: usize, r: &mut impl Rng) -> Option<Creature> {
    let choice = match &parts[0] {
        Creature::K1(_) => {
            let ts: Vec<_> = parts.iter().filter_map(Creature::as_k1).collect();
            let cands: Vec<usize> = (0..ts.len()).filter(|&l| ts[l].a.len() > p).collect();
            let l = *cands.get(r.gen_range(0..cands.len().max(1)))?;
            let side: Vec<usize> = ts.iter().map(|t| r.gen_range(0..t.val.len())).collect();
            let top = ts[l];
            let rows = index::sample(r, top.a.len(), p + 1)
                .into_iter()
                .map(|ai| {
                    let mut row = side.clone();
                    row[l] = top.val.iter().position(|f| f.get(top.i) == Some(top.a[ai])).unwrap();
                    row
                })
                .collect();
            Choice::K1 { l_star: l, val: rows }
        }
        Creature::K2(_) => {
            let cands: Vec<usize> = (0..parts.len()).filter(|&l| parts[l].val().len() > p).collect();
            let l = *cands.get(r.gen_range(0..cands.len().max(1)))?;
            let val = index::sample(r, parts[l].val().len(), p + 1).into_vec();
            let mut val = val;
            val.sort_unstable();
            Choice::K2 { l_star: l, val }
        }
        Creature::KN(c) => {
            let n = c.n;
            let mut letters: Vec<Letter> = parts.iter().map(|_| if r.gen_bool(0.5) { Letter::Var } else { Letter::Sym(r.gen_range(0..n)) }).collect();
            let keep = r.gen_range(0..letters.len());
            letters[keep] = Letter::Var;
            Choice::KN { letters }
        }
    };
    sigma_compose(parts, &choice).ok()
}

/// A random `y <= x` with its block witness; loose examples may skip a block
/// before each group.
pub fn compose_random(x: &CandidatePrefix, r: &mut impl Rng) -> (CandidatePrefix, Vec<BlockRange>) {
    let mut out = Vec::new();
    let mut ranges = Vec::new();
    let mut cursor = 0;
    while cursor < x.len() {
        let mut start = cursor;
        if !x.example.is_tight() && !out.is_empty() && x.len() - cursor > 1 && r.gen_bool(0.3) {
            start += 1;
        }
        let end = (start + r.gen_range(0..2)).min(x.len() - 1);
        match random_member(&x.creatures[start..=end], out.len(), r) {
            Some(c) => {
                out.push(c);
                ranges.push(BlockRange { start, end });
            }
            None => break,
        }
        cursor = end + 1;
    }
    (CandidatePrefix::new(x.example, out), ranges)
}

fn approximations(ps: &[&CandidatePrefix]) -> Vec<ApproxRecord> {
    ps.iter()
        .enumerate()
        .flat_map(|(source, p)| (0..=p.len()).map(move |n| ApproxRecord { source, n, prefix: p.r(n) }))
        .collect()
}

/// Seeded fragment: `x` of length 6 to 10 in the dense subspace.
pub fn sample_fragment(example: Example, seed: u64) -> FragmentSample {
    let mut r = rng(seed ^ 0x5eed);
    let len = r.gen_range(6..=10);
    let x = dense_prefix(example, len, seed);
    let (y, y_witness) = compose_random(&x, &mut r);
    let (z, z_witness) = compose_random(&y, &mut r);
    let approximations = approximations(&[&x, &y, &z]);
    FragmentSample { example, seed, x, y, y_witness, z, z_witness, approximations }
}

fn sources(s: &FragmentSample) -> [&CandidatePrefix; 3] {
    [&s.x, &s.y, &s.z]
}

/// A.1 at prefix level: `r_0` is empty, approximations are sound, distinct
/// prefixes differ at some `r_n`, and `r_m(X) = r_n(Y)` forces `m = n` and
/// agreement below.
pub fn check_a1(s: &FragmentSample) -> AxiomReport {
    let mut rep = AxiomReport::new("A.1", s);
    let src = sources(s);
    for a in &s.approximations {
        let p = src.get(a.source).copied();
        rep.check(p.is_some_and(|p| a.n <= p.len() && p.r(a.n) == a.prefix), "A.1 soundness", || format!("record r_{} of source {} is not an approximation", a.n, a.source));
        if a.n == 0 {
            rep.check(a.prefix.is_empty(), "A.1(1)", || format!("r_0 of source {} is not empty", a.source));
        }
    }
    for (i, p) in src.iter().enumerate() {
        for q in &src[i + 1..] {
            if p != q {
                let m = p.len().min(q.len());
                let differ = p.len() != q.len() || (0..=m).any(|n| p.r(n) != q.r(n));
                rep.check(differ, "A.1(2)", || "distinct prefixes agree on every approximation".into());
            }
        }
    }
    for (i, a) in s.approximations.iter().enumerate() {
        for b in &s.approximations[i + 1..] {
            if a.prefix == b.prefix {
                rep.check(a.n == b.n, "A.1(3)", || format!("r_{} = r_{} with different indices", a.n, b.n));
                let below = (0..a.n.min(b.n)).all(|j| a.prefix.r(j) == b.prefix.r(j));
                rep.check(below, "A.1(3)", || "approximations disagree below".into());
            }
        }
    }
    rep
}

fn dense_at(c: &Creature, p: usize) -> bool {
    match c {
        Creature::K1(x) => x.is_r1_at(p),
        Creature::K2(x) => x.val.len() == p + 1,
        Creature::KN(_) => true,
    }
}

fn dense_count(parts: &[Creature], p: usize) -> u128 {
    match &parts[0] {
        Creature::K1(_) => {
            let sizes: Vec<u128> = parts.iter().map(|c| c.val().len() as u128).collect();
            (0..parts.len())
                .map(|l| {
                    let a = parts[l].as_k1().map_or(0, |t| t.a.len() as u64);
                    let side: u128 = sizes.iter().enumerate().filter(|&(j, _)| j != l).map(|(_, &s)| s).product();
                    let choose = crate::subset::binomial(a, p as u64 + 1).unwrap_or(0) as u128;
                    choose * side.pow(p as u32 + 1)
                })
                .sum()
        }
        Creature::K2(_) => parts.iter().map(|c| crate::subset::binomial(c.val().len() as u64, p as u64 + 1).unwrap_or(0) as u128).sum(),
        Creature::KN(_) => sigma_count(parts).unwrap_or(0),
    }
}

// Block groups of `u` for a prefix below it: the recursion is shared, the
// per-group counts are not.
fn partitions(len: usize, tight: bool, f: &mut dyn FnMut(&[BlockRange])) {
    fn go(len: usize, tight: bool, from: usize, acc: &mut Vec<BlockRange>, f: &mut dyn FnMut(&[BlockRange])) {
        if !acc.is_empty() && acc.last().unwrap().end + 1 == len {
            f(acc);
        }
        let starts: Vec<usize> = if tight && !acc.is_empty() { alloc::vec![from] } else { (from..len).collect() };
        for start in starts {
            for end in start..len {
                acc.push(BlockRange { start, end });
                go(len, tight, end + 1, acc, f);
                acc.pop();
            }
        }
    }
    go(len, tight, 0, &mut Vec::new(), f);
}

/// Dense prefixes `v <=_fin u`, enumerated block group by block group.
pub fn enumerate_below(u: &CandidatePrefix) -> Result<Vec<CandidatePrefix>> {
    let mut out = Vec::new();
    let mut err = None;
    partitions(u.len(), u.example.is_tight(), &mut |groups| {
        let mut layers: Vec<Vec<Creature>> = alloc::vec![Vec::new()];
        for (p, g) in groups.iter().enumerate() {
            let members = match sigma_enumerate(&u.creatures[g.start..=g.end], SIGMA_GUARD) {
                Ok(m) => m,
                Err(e) => {
                    err = Some(e);
                    return;
                }
            };
            let members: Vec<Creature> = members.into_iter().filter(|c| dense_at(c, p)).collect();
            layers = layers.iter().flat_map(|l| members.iter().map(move |c| { let mut v = l.clone(); v.push(c.clone()); v })).collect();
        }
        out.extend(layers.into_iter().map(|cs| CandidatePrefix::new(u.example, cs)));
    });
    err.map_or(Ok(out), Err)
}

/// The same count by closed formula per group.
pub fn count_below(u: &CandidatePrefix) -> u128 {
    let mut total = 0u128;
    partitions(u.len(), u.example.is_tight(), &mut |groups| {
        total += groups.iter().enumerate().map(|(p, g)| dense_count(&u.creatures[g.start..=g.end], p)).product::<u128>();
    });
    total
}

fn witness_ok(big: &CandidatePrefix, small: &CandidatePrefix, w: &[BlockRange]) -> bool {
    w.len() == small.len() && w.iter().zip(&small.creatures).all(|(r, c)| r.end < big.len() && sigma_contains(&big.creatures[r.start..=r.end], c))
}

/// A.2: finiteness with an independent recount, the `<=` / `<=_fin`
/// correspondence on witnessed pairs, quasi-order laws and the `x` of A.2(3).
pub fn check_a2(s: &FragmentSample) -> AxiomReport {
    let mut rep = AxiomReport::new("A.2", s);
    for n in 0..=s.x.len().min(3) {
        let u = s.x.r(n);
        match enumerate_below(&u) {
            Ok(vs) => {
                rep.check(vs.len() as u128 == count_below(&u), "A.2(1)", || format!("r_{n}: enumerated {} but counted {}", vs.len(), count_below(&u)));
                rep.check(vs.iter().all(|v| le_fin(v, &u) && v.is_dense()), "A.2(1)", || format!("r_{n}: enumerated prefix is not below"));
                let mut fps: Vec<Vec<u64>> = vs.iter().map(|v| v.creatures.iter().map(Creature::fingerprint).collect()).collect();
                fps.sort();
                fps.dedup();
                rep.check(fps.len() == vs.len(), "A.2(1)", || format!("r_{n}: duplicates in the enumeration"));
            }
            Err(e) => rep.notices.push(format!("r_{n}: {e}")),
        }
    }
    let pairs = [(&s.x, &s.y, &s.y_witness), (&s.y, &s.z, &s.z_witness)];
    for (big, small, w) in pairs {
        rep.check(witness_ok(big, small, w), "A.2(2)", || "block witness does not compose".into());
        for n in 0..=small.len() {
            let found = (0..=big.len()).any(|m| le_fin(&small.r(n), &big.r(m)));
            rep.check(found, "A.2(2)", || format!("r_{n} of the smaller prefix is below no approximation"));
        }
    }
    for p in sources(s) {
        rep.check(le_fin(p, p), "quasi-order", || "le_fin is not reflexive".into());
    }
    for n in 0..=s.z.len() {
        let found = (0..=s.x.len()).any(|m| le_fin(&s.z.r(n), &s.x.r(m)));
        rep.check(found, "quasi-order", || format!("r_{n}(z) is below no r_m(x): transitivity fails"));
    }
    for n in 1..=s.y.len() {
        let v = s.y.r(n);
        let m = s.y_witness[n - 1].end + 1;
        let w = s.x.r(m);
        for i in 0..=n {
            let u = v.r(i);
            let top = if i == 0 { 0 } else { s.y_witness[i - 1].end + 1 };
            rep.check(le_fin(&u, &w.r(top)), "A.2(3)", || format!("no x below r_{m}(x) for r_{i}(y)"));
        }
    }
    rep
}

/// A.3 finite surrogates: extensions into `[depth_X(u), X]` are built and
/// checked rather than assumed.
pub fn check_a3(s: &FragmentSample) -> AxiomReport {
    let mut rep = AxiomReport::new("A.3", s);
    rep.check(s.x.validate().is_empty() && s.x.is_dense(), "A.3 base", || "x is not a dense candidate prefix".into());
    for i in 1..=s.y.len() {
        let u = s.y.r(i);
        let Some(n) = depth(&u, &s.x) else {
            rep.notices.push(format!("r_{i}(y) has no depth within x"));
            continue;
        };
        // A.3(1): [u, X] is nonempty, witnessed by u followed by thinned blocks of X.
        let mut z = u.creatures.clone();
        let mut ok = true;
        for (q, c) in s.x.creatures[n..].iter().enumerate() {
            match thin(c, i + q) {
                Some(t) => z.push(t),
                None => ok = false,
            }
        }
        let zp = CandidatePrefix::new(s.example, z);
        let good = ok && zp.validate().is_empty() && zp.is_dense() && zp.r(i) == u && le_fin(&zp, &s.x);
        rep.check(good, "A.3(1)", || format!("no member of [r_{i}(y), x] could be built"));
        // A.3(2): Y' = r_n(X) followed by y's blocks after i, the first of them
        // merged up to a block with enough material.
        let Some(jn) = (i..s.y.len()).find(|&j| j >= n) else {
            rep.notices.push(format!("y is too short past r_{i}(y) for A.3(2)"));
            continue;
        };
        let mut yp = s.x.creatures[..n].to_vec();
        let mut yw: Vec<BlockRange> = (0..n).map(|p| BlockRange { start: p, end: p }).collect();
        let head = thin_merge(&s.y.creatures[i..=jn], n);
        let Some(head) = head else {
            rep.check(false, "A.3(2)", || format!("could not merge y blocks {i}..={jn}"));
            continue;
        };
        yp.push(head);
        yw.push(BlockRange { start: s.y_witness[i].start, end: s.y_witness[jn].end });
        for j in jn + 1..s.y.len() {
            yp.push(s.y.creatures[j].clone());
            yw.push(s.y_witness[j]);
        }
        let ypp = CandidatePrefix::new(s.example, yp);
        let into_x = ypp.validate().is_empty() && ypp.is_dense() && ypp.r(n) == s.x.r(n) && witness_ok(&s.x, &ypp, &yw);
        rep.check(into_x, "A.3(2)", || format!("Y' for r_{i}(y) is not in [depth, X]"));
        let mut z = u.creatures.clone();
        for (q, c) in ypp.creatures[n..].iter().enumerate() {
            if let Some(t) = thin(c, i + q) {
                z.push(t);
            }
        }
        let zp = CandidatePrefix::new(s.example, z);
        let inside = zp.r(i) == u && le_fin(&zp.r(i), &s.y.r(i)) && (i..=zp.len()).all(|m| (0..=s.y.len()).any(|t| le_fin(&zp.r(m), &s.y.r(t))));
        rep.check(inside, "A.3(2)", || format!("[r_{i}(y), Y'] is not inside [r_{i}(y), y]"));
    }
    rep
}

/// `Sigma` of consecutive blocks with `dis` or `i` from the last one, thinned
/// to the dense law at position `p`.
fn thin_merge(parts: &[Creature], p: usize) -> Option<Creature> {
    let choice = match &parts[0] {
        Creature::K1(_) => {
            let ts: Vec<_> = parts.iter().filter_map(Creature::as_k1).collect();
            let last = ts.len() - 1;
            let side: Vec<usize> = alloc::vec![0; ts.len()];
            let top = ts[last];
            let rows = top.a.get(..p + 1)?
                .iter()
                .map(|&a| {
                    let mut row = side.clone();
                    row[last] = top.val.iter().position(|f| f.get(top.i) == Some(a))?;
                    Some(row)
                })
                .collect::<Option<_>>()?;
            Choice::K1 { l_star: last, val: rows }
        }
        Creature::K2(_) => {
            if parts.last()?.val().len() <= p {
                return None;
            }
            Choice::K2 { l_star: parts.len() - 1, val: (0..=p).collect() }
        }
        Creature::KN(_) => Choice::KN { letters: parts.iter().map(|_| Letter::Var).collect() },
    };
    sigma_compose(parts, &choice).ok()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Corruption {
    /// An approximation record with the wrong index.
    ApproxIndex,
    /// One block boundary of `y` moved.
    Boundary,
    /// One creature of `x` stripped of material.
    Material,
}

pub fn corrupt(s: &FragmentSample, class: Corruption) -> FragmentSample {
    let mut c = s.clone();
    match class {
        Corruption::ApproxIndex => {
            let rec = c.approximations.iter().find(|a| a.n > 0).cloned().unwrap();
            c.approximations.push(ApproxRecord { n: rec.n + 1, ..rec });
        }
        Corruption::Boundary => {
            let p = c.y.len() / 2;
            match &mut c.y.creatures[p] {
                Creature::K1(t) => t.m_up += 1,
                Creature::K2(t) => t.m_up += 1,
                Creature::KN(t) => t.m_up += 1,
            }
        }
        Corruption::Material => {
            let p = c.x.len() - 1;
            match &mut c.x.creatures[p] {
                Creature::K1(t) => {
                    let a = t.a.pop().unwrap();
                    t.val.retain(|f| f.get(t.i) != Some(a));
                }
                Creature::K2(t) => {
                    t.val.pop();
                }
                Creature::KN(t) => {
                    t.m_up += 1;
                }
            }
        }
    }
    c
}

/// Aggregate of seeded A.4 runs.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct A4Batch {
    pub example: Example,
    pub depth: usize,
    pub k: usize,
    pub targets: usize,
    pub attempted: usize,
    pub verified: usize,
    /// `(seed, reason)` of every run without a verified certificate.
    pub shortfalls: Vec<(u64, String)>,
}

/// One seeded A.4 run: dense base from `seed`, seeded coloring from `seed`.
pub fn a4_seeded(example: Example, seed: u64, depth: usize, k: usize, targets: usize) -> (CandidatePrefix, Result<A4Certificate>) {
    let base = dense_prefix(example, depth, seed);
    let col = SeededColoring(seed);
    let c = |x: &Creature| col.color(x);
    let cert = a4(&base, k, &c, &A4Options { targets, ..A4Options::default() });
    (base, cert)
}

/// Re-verifies a seeded certificate from scratch.
pub fn reverify_seeded(base: &CandidatePrefix, cert: &A4Certificate, seed: u64) -> core::result::Result<u64, String> {
    let col = SeededColoring(seed);
    verify_a4(base, cert, &|x: &Creature| col.color(x))
}

pub fn check_a4_finite(example: Example, seeds: impl IntoIterator<Item = u64>, depth: usize, k: usize, targets: usize) -> A4Batch {
    let mut batch = A4Batch { example, depth, k, targets, attempted: 0, verified: 0, shortfalls: Vec::new() };
    for seed in seeds {
        batch.attempted += 1;
        let (base, res) = a4_seeded(example, seed, depth, k, targets);
        match res.map_err(|e| e.to_string()).and_then(|c| reverify_seeded(&base, &c, seed)) {
            Ok(_) => batch.verified += 1,
            Err(e) => batch.shortfalls.push((seed, e)),
        }
    }
    batch
}
