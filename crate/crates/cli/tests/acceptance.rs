//! Acceptance criteria 1 to 13, one pass/fail line each. Limits are wall
//! clock seconds; every numeric comparison is exact.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use pcramsey::artifacts::{a4_run, seeded_product_coloring, A4Params, Artifact};
use pcramsey::formats::ColoringSpec;
use pcramsey_core::arrow::{certify_arrow, least_arrow, ArrowQuery, HypergraphColoring, Verdict, DEFAULT_BUDGET};
use pcramsey_core::axioms::{check_a1, check_a2, check_a3, corrupt, reverify_seeded, a4_seeded, sample_fragment, Corruption};
use pcramsey_core::bits::BitTable;
use pcramsey_core::creature::{sigma_count, sigma_enumerate, sigma_to_word, word_to_sigma, CandidatePrefix, Creature, Example, PartialFn, SIGMA_GUARD};
use pcramsey_core::hj::{hj_certify, hj_counterexample, hj_number, WordColoring};
use pcramsey_core::pigeonhole::{ex211, ex213, for_each_element, recover_conclusion, verify_recovery, A4Options, Recovery, Variant};
use pcramsey_core::product::{homogenize_product, s_bound, verify_selection, ProductColoring, ProductShape};
use pcramsey_core::sample::{dense_prefix, SeededColoring};

const C8_SEEDS: u64 = 100;
const C9_SEEDS: u64 = 100;
const C12_SEEDS: u64 = 50;
const C12_LENGTH: usize = 2;
const A4_TARGETS: usize = 2;

type Check = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1() -> Check {
    let r = least_arrow(3, 2, 6).map_err(|e| e.to_string())?;
    ensure(r == 6, || format!("least_arrow(3, 2, 6) = {r}"))?;
    let c = certify_arrow(ArrowQuery::new(5, 3, 2).unwrap(), DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(c.verdict == Verdict::Fails, || format!("5 -> (3)^2 verdict {:?}", c.verdict))?;
    let w = c.witness.ok_or("no witness")?;
    let w = HypergraphColoring::new(w.r, w.k, w.table).map_err(|e| e.to_string())?;
    ensure(w.find_homogeneous(3).is_none(), || "witness has a homogeneous 3-set".into())?;
    Ok(format!("least_arrow = 6; 5 -/-> (3)^2 witness re-verified after {} colorings", c.checked))
}

fn c2() -> Check {
    for m in 1..=8 {
        let r = least_arrow(m, 1, 20).map_err(|e| e.to_string())?;
        ensure(r == 2 * m - 1, || format!("least_arrow({m}, 1) = {r}"))?;
    }
    Ok("least_arrow(m, 1) = 2m - 1 for m = 1..8".into())
}

fn c3() -> Check {
    // S_1(m_0) = 2 m_0 - 1, N = C(S_1(m_0), 1), S_1(m_0, m_1) = m_1 * 2^N.
    let hand = |m0: u64, m1: u64| {
        let s0 = 2 * m0 - 1;
        (s0, m1 * (1u64 << s0))
    };
    for (ms, want) in [([2u32, 2], [3u64, 16]), ([1, 1], [1, 2])] {
        let got = s_bound(1, &ms, 1 << 20).map_err(|e| e.to_string())?;
        let h = hand(ms[0] as u64, ms[1] as u64);
        ensure(got == want && (h.0, h.1) == (want[0], want[1]), || format!("s_bound(1, {ms:?}) = {got:?}, hand {h:?}"))?;
    }
    Ok("s_bound(1,(2,2)) = (3,16), s_bound(1,(1,1)) = (1,2), hand formula agrees".into())
}

fn c4() -> Check {
    let shape = ProductShape::new(1, vec![3, 16]).unwrap();
    for seed in 0..1000 {
        let c = seeded_product_coloring(shape.clone(), seed).map_err(|e| e.to_string())?;
        let sel = homogenize_product(1, &[2, 2], &c).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(verify_selection(&c, &sel) && sel.h[0].len() == 2 && sel.h[1].len() == 2, || format!("seed {seed}: selection fails"))?;
    }
    Ok("1000/1000 seeded colorings of shape (3,16) homogenized and verified".into())
}

fn c5() -> Check {
    let shape = ProductShape::new(1, vec![1, 4]).unwrap();
    for i in 0..16u64 {
        let c = ProductColoring::new(shape.clone(), BitTable::from_u64(i, 4)).map_err(|e| e.to_string())?;
        let sel = homogenize_product(1, &[1, 2], &c).map_err(|e| format!("coloring {i}: {e}"))?;
        ensure(verify_selection(&c, &sel), || format!("coloring {i}: selection fails"))?;
    }
    Ok("16/16 colorings of shape (1,4) succeed and verify".into())
}

fn c6() -> Check {
    let n = hj_number(2, 4).map_err(|e| e.to_string())?;
    ensure(n == 2, || format!("hj_number(2) = {n}"))?;
    for i in 0..16u64 {
        let c = WordColoring::new(2, 2, BitTable::from_u64(i, 4)).unwrap();
        ensure(hj_certify(&c).is_some(), || format!("length-2 coloring {i} has no line"))?;
    }
    let ce = hj_counterexample(2, 1).map_err(|e| e.to_string())?.ok_or("no length-1 counterexample")?;
    ensure(hj_certify(&ce).is_none(), || "counterexample has a line".into())?;
    Ok(format!("hj_number(2, 2) = 2; 16/16 length-2 colorings have lines; length-1 counterexample {:?}", ce.table.to_bits()))
}

fn c7() -> Check {
    let mut checked = 0u64;
    for seed in 0..10 {
        for depth in 1..=5 {
            let t = dense_prefix(Example::Ex213, depth, seed);
            for a in 0..depth {
                for b in a..depth {
                    let parts = &t.creatures[a..=b];
                    let all = sigma_enumerate(parts, SIGMA_GUARD).map_err(|e| e.to_string())?;
                    let count = sigma_count(parts).map_err(|e| e.to_string())?;
                    ensure(all.len() as u128 == count, || format!("seed {seed} blocks {a}..={b}: {} vs count {count}", all.len()))?;
                    for c in &all {
                        let w = sigma_to_word(parts, c).map_err(|e| e.to_string())?;
                        let back = word_to_sigma(parts, &w).map_err(|e| e.to_string())?;
                        ensure(&back == c, || format!("seed {seed} blocks {a}..={b}: round trip fails at {w}"))?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} compositions round-trip over 50 base prefixes of depth <= 5"))
}

fn a4_batch(example: Example, seeds: u64, depth: usize, k: usize) -> Check {
    let mut elements = 0;
    for seed in 0..seeds {
        let (base, cert) = a4_seeded(example, seed, depth, k, A4_TARGETS);
        ensure(base.is_dense(), || format!("seed {seed}: base is not dense"))?;
        let cert = cert.map_err(|e| format!("seed {seed}: {e}"))?;
        elements += reverify_seeded(&base, &cert, seed).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    Ok(format!("{seeds}/{seeds} certificates verified ({elements} elements re-colored)"))
}

fn c8() -> Check {
    a4_batch(Example::Ex213, C8_SEEDS, 6, 1)
}

fn c9() -> Check {
    a4_batch(Example::Ex211, C9_SEEDS, 8, 2)
}

fn bijective(base: &CandidatePrefix, k: usize) -> Result<u64, String> {
    let mut codes = BTreeSet::new();
    let mut fps = BTreeSet::new();
    let mut err = None;
    let count = for_each_element(base, k, &mut |x: &Creature| {
        let key = match base.example {
            Example::Ex211 => ex211::encode(&base.creatures, k, x)
                .ok_or_else(|| "encode failed".to_string())
                .and_then(|c| ex211::decode(&base.creatures, k, &c).map(|y| (format!("{c:?}"), y)).map_err(|e| e.to_string())),
            _ => ex213::encode(&base.creatures, k, x)
                .and_then(|w| ex213::decode(&base.creatures, k, &w).map(|y| (w.to_string(), y)))
                .map_err(|e| e.to_string()),
        };
        match key {
            Ok((code, y)) if &y == x => {
                codes.insert(code);
                fps.insert(x.fingerprint());
                true
            }
            Ok((code, _)) => {
                err = Some(format!("decode(encode(x)) != x at {code}"));
                false
            }
            Err(e) => {
                err = Some(e);
                false
            }
        }
    })
    .map_err(|e| e.to_string())?;
    if let Some(e) = err {
        return Err(e);
    }
    ensure(codes.len() as u64 == count && fps.len() as u64 == count, || format!("{count} elements, {} codes, {} distinct", codes.len(), fps.len()))?;
    Ok(count)
}

fn c10() -> Check {
    let mut total = 0;
    for seed in 0..C8_SEEDS {
        total += bijective(&dense_prefix(Example::Ex213, 6, seed), 1).map_err(|e| format!("2.13 seed {seed}: {e}"))?;
    }
    for seed in 0..C9_SEEDS {
        total += bijective(&dense_prefix(Example::Ex211, 8, seed), 2).map_err(|e| format!("2.11 seed {seed}: {e}"))?;
    }
    Ok(format!("decode . encode = id and codes injective over {total} elements of the criterion 8 and 9 bases"))
}

fn c11() -> Check {
    let mut checks = 0;
    let examples = [Example::Ex210, Example::Ex211, Example::Ex213];
    for ex in examples {
        for seed in 0..100 {
            let s = sample_fragment(ex, seed);
            for r in [check_a1(&s), check_a2(&s), check_a3(&s)] {
                ensure(r.passed(), || format!("{ex:?} seed {seed} {}: {:?}", r.axiom, r.violations))?;
                checks += r.checks;
            }
        }
        let s = sample_fragment(ex, 0);
        let caught = [
            (Corruption::ApproxIndex, check_a1(&corrupt(&s, Corruption::ApproxIndex)).passed()),
            (Corruption::Boundary, check_a2(&corrupt(&s, Corruption::Boundary)).passed()),
            (Corruption::Material, check_a3(&corrupt(&s, Corruption::Material)).passed()),
        ];
        for (class, passed) in caught {
            ensure(!passed, || format!("{ex:?}: corruption {class:?} not detected"))?;
        }
    }
    Ok(format!("300 fragments, {checks} checks, 0 violations; 9/9 corruptions detected"))
}

fn recovery(seed: u64) -> Result<(CandidatePrefix, Recovery), String> {
    let base = dense_prefix(Example::Ex211, 8, seed);
    let col = SeededColoring(seed);
    let d = |k: usize, f: &PartialFn| col.color_pos(k, f);
    let rec = recover_conclusion(&base, &d, Variant::B, C12_LENGTH, &A4Options::default()).map_err(|e| format!("seed {seed}: {e}"))?;
    Ok((base, rec))
}

fn c12() -> Check {
    let mut checked = 0;
    for seed in 0..C12_SEEDS {
        let (base, rec) = recovery(seed)?;
        let col = SeededColoring(seed);
        let d = |k: usize, f: &PartialFn| col.color_pos(k, f);
        ensure(rec.colors.len() == 1, || format!("seed {seed}: {} colors", rec.colors.len()))?;
        checked += verify_recovery(&base, &rec, &d).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    Ok(format!("{C12_SEEDS}/{C12_SEEDS} recoveries monochromatic ({checked} possibilities re-colored)"))
}

fn snapshot() -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let cert = certify_arrow(ArrowQuery::new(5, 3, 2).unwrap(), DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    out.push(serde_json::to_string(&cert).unwrap());
    let shape = ProductShape::new(1, vec![3, 16]).unwrap();
    for seed in 0..20 {
        let c = seeded_product_coloring(shape.clone(), seed).map_err(|e| e.to_string())?;
        out.push(serde_json::to_string(&homogenize_product(1, &[2, 2], &c).map_err(|e| e.to_string())?).unwrap());
    }
    for seed in 0..10 {
        for (ex, depth, k) in [(Example::Ex213, 6, 1), (Example::Ex211, 8, 2)] {
            let p = A4Params { example: ex, depth, k, targets: A4_TARGETS };
            let a = a4_run(p, ColoringSpec::named("seeded", seed, 0).unwrap(), seed).map_err(|e| e.to_string())?;
            out.push(Artifact::A4(a).to_json());
        }
        out.push(serde_json::to_string(&recovery(seed)?.1).unwrap());
        let s = sample_fragment(Example::Ex210, seed);
        out.push(serde_json::to_string(&check_a2(&s)).unwrap());
    }
    Ok(out)
}

fn c13() -> Check {
    let a = snapshot()?;
    let b = snapshot()?;
    let first_diff = a.iter().zip(&b).position(|(x, y)| x != y);
    ensure(a.len() == b.len() && first_diff.is_none(), || format!("artifact {first_diff:?} differs between runs"))?;
    let bytes: usize = a.iter().map(String::len).sum();
    Ok(format!("{} artifacts ({bytes} bytes) byte-identical across two runs", a.len()))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "Ramsey certification", limit: secs(10), run: c1 },
        Criterion { id: 2, name: "closed form k = 1", limit: secs(1), run: c2 },
        Criterion { id: 3, name: "S_k recursion", limit: None, run: c3 },
        Criterion { id: 4, name: "product homogenizer soundness", limit: secs(30), run: c4 },
        Criterion { id: 5, name: "product homogenizer micro-completeness", limit: secs(1), run: c5 },
        Criterion { id: 6, name: "Hales-Jewett number", limit: secs(1), run: c6 },
        Criterion { id: 7, name: "sigma round trip", limit: secs(10), run: c7 },
        Criterion { id: 8, name: "A.4 example 2.13", limit: secs(60), run: c8 },
        Criterion { id: 9, name: "A.4 example 2.11", limit: secs(120), run: c9 },
        Criterion { id: 10, name: "reduction bijectivity", limit: None, run: c10 },
        Criterion { id: 11, name: "axiom batteries", limit: secs(60), run: c11 },
        Criterion { id: 12, name: "conclusion recovery", limit: None, run: c12 },
        Criterion { id: 13, name: "determinism", limit: None, run: c13 },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let res = (c.run)();
        let took = start.elapsed();
        let late = c.limit.is_some_and(|l| took > l);
        let limit = c.limit.map_or("none".to_string(), |l| format!("{}s", l.as_secs()));
        let (tag, detail) = match (&res, late) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("over time limit: {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} [{tag}] {} ({:.3}s, limit {limit}): {detail}", c.id, c.name, took.as_secs_f64());
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
