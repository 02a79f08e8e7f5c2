//! Artifact builders, one per subcommand, and their independent verifiers.

use anyhow::{anyhow, bail, ensure, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use pcramsey_core::arrow::{scan_range, trivial_verdict, ArrowQuery, HypergraphColoring, Verdict};
use pcramsey_core::axioms::{check_a1, check_a2, check_a3, corrupt, sample_fragment, Corruption};
use pcramsey_core::bits::BitTable;
use pcramsey_core::creature::{CandidatePrefix, Example};
use pcramsey_core::hj::{hj_certify, hj_counterexample, hj_number, VariableWord, WordColoring};
use pcramsey_core::pigeonhole::{a4, recover_conclusion, verify_a4, verify_recovery, A4Certificate, A4Options, Recovery, Variant};
use pcramsey_core::product::{homogenize_product, s_bound, s_kn_bound, verify_selection, HomogeneousSelection, ProductColoring, ProductShape};
use pcramsey_core::sample::{dense_prefix, SeededColoring};
use pcramsey_core::tree::{homogenize_varying, verify_tree, Targets, TreeCertificate, VaryingTable};

use crate::formats::{render, ColoringSpec, PosColoringSpec, ProductColoringFile, VaryingTableFile, WordColoringFile};
use crate::UsageError;

/// Every artifact the tool writes; `kind` selects the verifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Artifact {
    Arrow(ArrowArtifact),
    Bounds(BoundsArtifact),
    Homogenize(HomogenizeArtifact),
    Tree(TreeArtifact),
    HjNumber(HjNumberArtifact),
    HjLine(HjLineArtifact),
    Creatures(CreaturesArtifact),
    A4(A4Artifact),
    A4Batch(A4BatchArtifact),
    Recovery(RecoveryArtifact),
    Axioms(AxiomsArtifact),
}

impl Artifact {
    pub fn kind(&self) -> &'static str {
        match self {
            Artifact::Arrow(_) => "arrow",
            Artifact::Bounds(_) => "bounds",
            Artifact::Homogenize(_) => "homogenize",
            Artifact::Tree(_) => "tree",
            Artifact::HjNumber(_) => "hj-number",
            Artifact::HjLine(_) => "hj-line",
            Artifact::Creatures(_) => "creatures",
            Artifact::A4(_) => "a4",
            Artifact::A4Batch(_) => "a4-batch",
            Artifact::Recovery(_) => "recovery",
            Artifact::Axioms(_) => "axioms",
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("artifacts serialize");
        s.push('\n');
        s
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(UsageError(msg.into()))
}

// ---------------------------------------------------------------- arrow

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrowArtifact {
    pub query: ArrowQuery,
    pub verdict: Verdict,
    pub witness: Option<BitTable>,
    pub checked: u64,
    pub budget: u64,
}

/// Lowest coloring index in `0..total` without a homogeneous set, scanning
/// disjoint ranges in parallel.
pub fn scan_all(q: &ArrowQuery, total: u64) -> Option<u64> {
    let chunk = (total / (rayon::current_num_threads() as u64 * 16)).max(1 << 10);
    let chunks = total.div_ceil(chunk);
    (0..chunks).into_par_iter().find_map_first(|c| scan_range(q, c * chunk, ((c + 1) * chunk).min(total)))
}

pub fn arrow(r: u32, m: u32, k: u32, budget: u64) -> Result<ArrowArtifact> {
    let q = ArrowQuery::new(r, m, k)?;
    ensure!(budget > 0, usage("budget must be at least 1"));
    if let Some(c) = trivial_verdict(&q) {
        return Ok(ArrowArtifact { query: q, verdict: c.verdict, witness: c.witness.map(|w| w.table), checked: c.checked, budget });
    }
    let bits = q.table_len();
    if bits >= 63 || (1u64 << bits) > budget {
        return Ok(ArrowArtifact { query: q, verdict: Verdict::CapExceeded, witness: None, checked: 0, budget });
    }
    let total = 1u64 << bits;
    Ok(match scan_all(&q, total) {
        Some(i) => ArrowArtifact {
            query: q,
            verdict: Verdict::Fails,
            witness: Some(HypergraphColoring::from_index(r, k, i).table),
            checked: i + 1,
            budget,
        },
        None => ArrowArtifact { query: q, verdict: Verdict::Holds, witness: None, checked: total, budget },
    })
}

fn verify_arrow(a: &ArrowArtifact) -> Result<u64> {
    let q = a.query;
    q.validate()?;
    match a.verdict {
        Verdict::Fails => {
            let w = a.witness.clone().context("a failing verdict needs a witness coloring")?;
            let c = HypergraphColoring::new(q.r, q.k, w)?;
            if let Some((mask, color)) = c.find_homogeneous(q.m) {
                bail!("witness has the homogeneous set {mask:#x} in color {color}");
            }
            Ok(1)
        }
        Verdict::Holds => {
            ensure!(a.witness.is_none(), "a holding verdict carries no witness");
            if trivial_verdict(&q).is_some_and(|c| c.verdict == Verdict::Holds) {
                return Ok(0);
            }
            let bits = q.table_len();
            ensure!(bits < 63, "C(r, k) = {bits} is beyond exhaustive enumeration");
            let total = 1u64 << bits;
            if let Some(i) = scan_all(&q, total) {
                bail!("coloring {i} has no homogeneous {}-set", q.m);
            }
            ensure!(a.checked == total, "claimed {} colorings checked, enumeration has {total}", a.checked);
            Ok(total)
        }
        Verdict::CapExceeded => {
            let again = arrow(q.r, q.m, q.k, a.budget)?;
            ensure!(again.verdict == Verdict::CapExceeded, "query fits the budget; verdict is {:?}", again.verdict);
            Ok(0)
        }
    }
}

// ---------------------------------------------------------------- bounds

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsArtifact {
    pub k: u32,
    pub ms: Vec<u32>,
    /// `None` for `S_k`, `Some(n)` for the varying-index `S_{k,n}`.
    pub n: Option<u32>,
    pub cap: u64,
    pub values: Vec<u64>,
}

impl BoundsArtifact {
    pub fn line(&self) -> String {
        let v: Vec<String> = self.values.iter().map(u64::to_string).collect();
        format!("{}\n", v.join(" "))
    }
}

pub fn bounds(k: u32, ms: &[u32], n: Option<u32>, cap: u64) -> Result<BoundsArtifact> {
    ensure!(!ms.is_empty(), usage("--ms needs at least one size"));
    let values = match n {
        None => s_bound(k, ms, cap)?,
        Some(n) => s_kn_bound(k, n, ms, cap)?,
    };
    Ok(BoundsArtifact { k, ms: ms.to_vec(), n, cap, values })
}

// ---------------------------------------------------------------- homogenize

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogenizeArtifact {
    pub k: u32,
    pub ms: Vec<u32>,
    /// Seed of the generated coloring; absent for colorings read from a file.
    pub seed: Option<u64>,
    pub coloring: ProductColoringFile,
    pub selection: HomogeneousSelection,
}

pub fn seeded_product_coloring(shape: ProductShape, seed: u64) -> Result<ProductColoring> {
    let col = SeededColoring(seed);
    Ok(ProductColoring::from_fn(shape, |sub, xs| {
        col.color_hash(xs.iter().fold(sub, |h, &x| h.wrapping_mul(0x9e37_79b9).wrapping_add(x as u64 + 1)))
    })?)
}

pub fn homogenize(k: u32, ms: &[u32], sizes: Option<Vec<u32>>, file: Option<ProductColoringFile>, seed: u64) -> Result<HomogenizeArtifact> {
    let (coloring, seed) = match file {
        Some(f) => {
            ensure!(f.k == k, usage(format!("coloring file has k = {}, --k is {k}", f.k)));
            (f.to_coloring()?, None)
        }
        None => {
            let sizes = match sizes {
                Some(s) => s,
                None => s_bound(k, ms, 1 << 20)?.iter().map(|&v| u32::try_from(v)).collect::<std::result::Result<_, _>>()?,
            };
            (seeded_product_coloring(ProductShape::new(k, sizes)?, seed)?, Some(seed))
        }
    };
    let selection = homogenize_product(k, ms, &coloring)?;
    Ok(HomogenizeArtifact { k, ms: ms.to_vec(), seed, coloring: ProductColoringFile::from_coloring(&coloring), selection })
}

fn verify_homogenize(a: &HomogenizeArtifact) -> Result<u64> {
    let c = a.coloring.to_coloring()?;
    ensure!(c.shape.k == a.k, "coloring k differs from the artifact k");
    let s = &a.selection;
    ensure!(s.h.len() == a.ms.len(), "selection has {} sets for {} sizes", s.h.len(), a.ms.len());
    for (j, (h, &m)) in s.h.iter().zip(&a.ms).enumerate() {
        ensure!(h.len() == m as usize, "|H_{j}| = {} but m_{j} = {m}", h.len());
    }
    ensure!(verify_selection(&c, s), "selection is not monochromatic in color {}", s.color);
    let mut count = 1u64;
    let first = s.h.first().map_or(0, |h| pcramsey_core::subset::binomial(h.len() as u64, a.k as u64).unwrap_or(0));
    count *= first;
    for h in &s.h[1..] {
        count *= h.len() as u64;
    }
    Ok(count)
}

// ---------------------------------------------------------------- tree

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeArtifact {
    pub k: u32,
    pub ms: Vec<u32>,
    pub levels: usize,
    pub seed: Option<u64>,
    pub coloring: VaryingTableFile,
    pub certificate: TreeCertificate,
}

pub fn tree(k: u32, ms: &[u32], sizes: &[u32], levels: usize, file: Option<VaryingTableFile>, seed: u64) -> Result<TreeArtifact> {
    ensure!(!ms.is_empty() && levels > 0, usage("--ms and --levels must be nonempty"));
    let (table, seed) = match file {
        Some(f) => (f.to_table()?, None),
        None => {
            let col = SeededColoring(seed);
            let t = VaryingTable::from_fn(k, sizes.to_vec(), |n, l, sub, xs| {
                col.color_hash(xs.iter().fold(((n as u64) << 40) ^ ((l as u64) << 32) ^ sub, |h, &x| h.wrapping_mul(31).wrapping_add(x as u64 + 1)))
            })?;
            (t, Some(seed))
        }
    };
    use pcramsey_core::tree::VaryingIndexColoring;
    let (k, sizes) = (table.k(), table.sizes().to_vec());
    let certificate = homogenize_varying(ms, &table, Targets { l: ms.len(), n: levels })?;
    Ok(TreeArtifact { k, ms: ms.to_vec(), levels, seed, coloring: VaryingTableFile::from_table(&table, k, &sizes), certificate })
}

fn verify_tree_artifact(a: &TreeArtifact) -> Result<u64> {
    let t = a.coloring.to_table()?;
    let c = &a.certificate;
    ensure!(c.ms == a.ms && c.k == a.k, "certificate parameters differ from the artifact");
    ensure!(c.l.len() >= a.ms.len() && c.n.len() >= a.levels, "certificate has fewer levels than requested");
    ensure!(verify_tree(&t, c), "tree certificate does not verify against the table");
    Ok(c.n.len() as u64)
}

// ---------------------------------------------------------------- hj

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HjNumberArtifact {
    pub n: u8,
    pub cap: usize,
    pub value: usize,
    /// A line-free coloring one length below `value`.
    pub counterexample: Option<WordColoringFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HjLineArtifact {
    pub seed: Option<u64>,
    pub coloring: WordColoringFile,
    pub line: Option<String>,
    pub color: Option<u8>,
}

pub fn hj_number_artifact(n: u8, cap: usize) -> Result<HjNumberArtifact> {
    let value = hj_number(n, cap)?;
    let counterexample = if value > 1 { hj_counterexample(n, value - 1)?.as_ref().map(WordColoringFile::from_coloring) } else { None };
    Ok(HjNumberArtifact { n, cap, value, counterexample })
}

pub fn seeded_word_coloring(n: u8, length: usize, seed: u64) -> Result<WordColoring> {
    let points = (n as u64).checked_pow(length as u32).filter(|&p| p <= 1 << 24).ok_or_else(|| usage("N^length above 2^24 points"))?;
    let col = SeededColoring(seed);
    Ok(WordColoring::new(n, length, BitTable::from_fn(points as usize, |i| col.color_hash(i as u64)))?)
}

pub fn hj_line(n: u8, length: usize, file: Option<WordColoringFile>, seed: u64) -> Result<HjLineArtifact> {
    let (c, seed) = match file {
        Some(f) => (f.to_coloring()?, None),
        None => (seeded_word_coloring(n, length, seed)?, Some(seed)),
    };
    let found = hj_certify(&c);
    Ok(HjLineArtifact {
        seed,
        coloring: WordColoringFile::from_coloring(&c),
        line: found.as_ref().map(|(w, _)| w.to_string()),
        color: found.map(|(_, col)| col),
    })
}

fn verify_hj_number(a: &HjNumberArtifact) -> Result<u64> {
    ensure!(a.value >= 1 && a.value <= a.cap, "value {} outside 1..={}", a.value, a.cap);
    if let Some(ce) = hj_counterexample(a.n, a.value)? {
        bail!("length {} has a line-free coloring {:?}", a.value, ce.table);
    }
    let mut checked = 1u64 << (a.n as u32).pow(a.value as u32);
    if a.value > 1 {
        let ce = a.counterexample.as_ref().context("missing counterexample one length below")?.to_coloring()?;
        ensure!(ce.n == a.n && ce.length == a.value - 1, "counterexample has the wrong shape");
        if let Some((w, _)) = hj_certify(&ce) {
            bail!("counterexample has the monochromatic line {w}");
        }
        checked += 1;
    }
    Ok(checked)
}

fn verify_hj_line(a: &HjLineArtifact) -> Result<u64> {
    let c = a.coloring.to_coloring()?;
    match (&a.line, a.color) {
        (Some(line), Some(color)) => {
            let w = VariableWord::parse(c.n, line)?;
            ensure!(w.len() == c.length, "line length differs from the coloring length");
            for x in 0..c.n {
                ensure!(c.color(&w.point(x)) == color, "point {} of line {line} has the other color", w.point(x));
            }
            Ok(c.n as u64)
        }
        (None, None) => {
            ensure!(hj_certify(&c).is_none(), "a monochromatic line exists");
            Ok(1)
        }
        _ => bail!("line and color must be present together"),
    }
}

// ---------------------------------------------------------------- creatures

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreaturesArtifact {
    pub example: Example,
    pub depth: usize,
    pub seed: u64,
    pub dense: bool,
    pub prefix: CandidatePrefix,
    pub rendered: Vec<String>,
}

pub fn creatures(example: Example, depth: usize, seed: u64) -> Result<CreaturesArtifact> {
    ensure!((1..=16).contains(&depth), usage("--depth must be in 1..=16"));
    let prefix = dense_prefix(example, depth, seed);
    Ok(CreaturesArtifact { example, depth, seed, dense: prefix.is_dense(), rendered: prefix.creatures.iter().map(render).collect(), prefix })
}

fn verify_creatures(a: &CreaturesArtifact) -> Result<u64> {
    let p = &a.prefix;
    ensure!(p.example == a.example && p.len() == a.depth, "prefix does not match example and depth");
    if let Some(v) = p.validate().first() {
        bail!("{}: {}", v.clause, v.detail);
    }
    ensure!(p.is_dense() == a.dense, "dense flag is wrong");
    let rendered: Vec<String> = p.creatures.iter().map(render).collect();
    ensure!(rendered == a.rendered, "rendering differs");
    Ok(p.len() as u64)
}

// ---------------------------------------------------------------- a4

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct A4Artifact {
    pub seed: u64,
    pub coloring: ColoringSpec,
    pub base: CandidatePrefix,
    pub certificate: A4Certificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct A4Params {
    pub example: Example,
    pub depth: usize,
    pub k: usize,
    pub targets: usize,
}

impl A4Params {
    fn check(&self) -> Result<()> {
        ensure!((1..=16).contains(&self.depth), usage("--depth must be in 1..=16"));
        ensure!(self.k >= 1 && self.targets >= 1, usage("--k and --targets must be at least 1"));
        Ok(())
    }
}

pub fn a4_run(p: A4Params, spec: ColoringSpec, seed: u64) -> Result<A4Artifact> {
    p.check()?;
    spec.check(p.example).map_err(|e| usage(e.to_string()))?;
    let base = dense_prefix(p.example, p.depth, seed);
    let oracle = spec.oracle(&base.creatures);
    let certificate = a4(&base, p.k, &*oracle, &A4Options { targets: p.targets, ..A4Options::default() })?;
    drop(oracle);
    Ok(A4Artifact { seed, coloring: spec, base, certificate })
}

fn verify_a4_artifact(a: &A4Artifact) -> Result<u64> {
    let base = &a.base;
    if let Some(v) = base.validate().first() {
        bail!("base: {}: {}", v.clause, v.detail);
    }
    ensure!(base.is_dense(), "base is not in the dense subspace");
    ensure!(a.certificate.example == base.example, "certificate example differs from the base");
    a.coloring.check(base.example)?;
    let oracle = a.coloring.oracle(&base.creatures);
    verify_a4(base, &a.certificate, &*oracle).map_err(|e| anyhow!(e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct A4BatchArtifact {
    pub example: Example,
    pub depth: usize,
    pub k: usize,
    pub targets: usize,
    pub coloring: String,
    pub first_seed: u64,
    pub attempted: usize,
    pub verified: usize,
    pub runs: Vec<A4Artifact>,
    /// `(seed, reason)` for runs without a certificate.
    pub shortfalls: Vec<(u64, String)>,
}

/// Seeds `seed..seed + count`; a seeded coloring takes each run's own seed.
pub fn a4_batch(p: A4Params, coloring: &str, color: u8, seed: u64, count: usize) -> Result<A4BatchArtifact> {
    p.check()?;
    ColoringSpec::named(coloring, seed, color).map_err(|e| usage(e.to_string()))?.check(p.example).map_err(|e| usage(e.to_string()))?;
    let results: Vec<(u64, Result<A4Artifact>)> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed + i;
            (s, ColoringSpec::named(coloring, s, color).and_then(|spec| a4_run(p, spec, s)))
        })
        .collect();
    let mut runs = Vec::new();
    let mut shortfalls = Vec::new();
    for (s, r) in results {
        match r.and_then(|a| verify_a4_artifact(&a).map(|_| a)) {
            Ok(a) => runs.push(a),
            Err(e) => {
                log::warn!("seed {s}: {e:#}");
                shortfalls.push((s, format!("{e:#}")));
            }
        }
    }
    Ok(A4BatchArtifact {
        example: p.example,
        depth: p.depth,
        k: p.k,
        targets: p.targets,
        coloring: coloring.to_string(),
        first_seed: seed,
        attempted: count,
        verified: runs.len(),
        runs,
        shortfalls,
    })
}

fn verify_a4_batch(a: &A4BatchArtifact) -> Result<u64> {
    ensure!(a.runs.len() == a.verified && a.verified + a.shortfalls.len() == a.attempted, "batch counts are inconsistent");
    let checked: Vec<Result<u64>> = a.runs.par_iter().map(verify_a4_artifact).collect();
    let mut total = 0;
    for (run, c) in a.runs.iter().zip(checked) {
        total += c.with_context(|| format!("seed {}", run.seed))?;
    }
    Ok(total)
}

// ---------------------------------------------------------------- recovery

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryArtifact {
    pub seed: u64,
    pub d: PosColoringSpec,
    pub base: CandidatePrefix,
    pub recovery: Recovery,
}

pub fn recovery(example: Example, depth: usize, variant: Variant, length: usize, d: PosColoringSpec, seed: u64) -> Result<RecoveryArtifact> {
    ensure!((1..=16).contains(&depth) && length >= 1, usage("--depth must be in 1..=16 and --length at least 1"));
    let base = dense_prefix(example, depth, seed);
    let dc = |k: usize, f: &pcramsey_core::creature::PartialFn| d.color(k, f);
    let recovery = recover_conclusion(&base, &dc, variant, length, &A4Options::default())?;
    Ok(RecoveryArtifact { seed, d, base, recovery })
}

fn verify_recovery_artifact(a: &RecoveryArtifact) -> Result<u64> {
    if let Some(v) = a.base.validate().first() {
        bail!("base: {}: {}", v.clause, v.detail);
    }
    ensure!(a.base.is_dense(), "base is not in the dense subspace");
    let dc = |k: usize, f: &pcramsey_core::creature::PartialFn| a.d.color(k, f);
    verify_recovery(&a.base, &a.recovery, &dc).map_err(|e| anyhow!(e))
}

// ---------------------------------------------------------------- axioms

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomsArtifact {
    pub example: Example,
    pub first_seed: u64,
    pub count: usize,
    pub corrupt: Option<Corruption>,
    pub checks: u64,
    pub violations: usize,
    pub reports: Vec<serde_json::Value>,
}

pub fn axioms(example: Example, seed: u64, count: usize, corruption: Option<Corruption>) -> Result<AxiomsArtifact> {
    ensure!(count >= 1, usage("--count must be at least 1"));
    let per_seed: Vec<Vec<serde_json::Value>> = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let s = sample_fragment(example, seed + i);
            let s = corruption.map_or(s.clone(), |c| corrupt(&s, c));
            [check_a1(&s), check_a2(&s), check_a3(&s)].iter().map(|r| serde_json::to_value(r).expect("reports serialize")).collect()
        })
        .collect();
    let reports: Vec<serde_json::Value> = per_seed.into_iter().flatten().collect();
    let checks = reports.iter().map(|r| r["checks"].as_u64().unwrap_or(0)).sum();
    let violations = reports.iter().map(|r| r["violations"].as_array().map_or(0, Vec::len)).sum();
    Ok(AxiomsArtifact { example, first_seed: seed, count, corrupt: corruption, checks, violations, reports })
}

fn verify_axioms(a: &AxiomsArtifact) -> Result<u64> {
    let again = axioms(a.example, a.first_seed, a.count, a.corrupt)?;
    ensure!(again.reports == a.reports, "re-running the batteries gives different reports");
    ensure!(again.violations == a.violations && again.checks == a.checks, "totals differ from the reports");
    ensure!(a.violations == 0, "{} violations reported", a.violations);
    Ok(a.checks)
}

// ---------------------------------------------------------------- verify

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub kind: String,
    pub artifact: String,
    pub ok: bool,
    pub checked: u64,
    pub detail: Option<String>,
}

/// Re-derives every claim of an artifact; embedded `verified` flags are ignored.
pub fn verify(text: &str) -> Verification {
    let parsed: std::result::Result<Artifact, _> = serde_json::from_str(text);
    let (artifact, res) = match parsed {
        Ok(a) => {
            let res = match &a {
                Artifact::Arrow(x) => verify_arrow(x),
                Artifact::Bounds(x) => bounds(x.k, &x.ms, x.n, x.cap).and_then(|b| {
                    ensure!(b.values == x.values, "recomputed bounds {:?} differ", b.values);
                    Ok(b.values.len() as u64)
                }),
                Artifact::Homogenize(x) => verify_homogenize(x),
                Artifact::Tree(x) => verify_tree_artifact(x),
                Artifact::HjNumber(x) => verify_hj_number(x),
                Artifact::HjLine(x) => verify_hj_line(x),
                Artifact::Creatures(x) => verify_creatures(x),
                Artifact::A4(x) => verify_a4_artifact(x),
                Artifact::A4Batch(x) => verify_a4_batch(x),
                Artifact::Recovery(x) => verify_recovery_artifact(x),
                Artifact::Axioms(x) => verify_axioms(x),
            };
            (a.kind().to_string(), res)
        }
        Err(e) => ("unknown".to_string(), Err(anyhow!("not a readable artifact: {e}"))),
    };
    match res {
        Ok(checked) => Verification { kind: "verification".into(), artifact, ok: true, checked, detail: None },
        Err(e) => Verification { kind: "verification".into(), artifact, ok: false, checked: 0, detail: Some(format!("{e:#}")) },
    }
}
