//! Acceptance criteria 1 to 9. Prints one `[PASS]`/`[FAIL]` line per
//! criterion and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use gradekit::dsl::RandomSpec;
use gradekit::random::{random_constraint, random_formula, random_structure_with, rng};
use gradekit_core::extensions::{check_ext_main, check_ext_total, inflate, is_elementary_ext_noid};
use gradekit_core::formula::types::TypeOracle;
use gradekit_core::formula::{enumerate_formulas, Compiled, EnumBounds};
use gradekit_core::capture::{capture_set_rel_total, capture_set_sym_total, verify_capture};
use gradekit_core::indisc::{defining_formula, full_indisc, quotient, IndiscError};
use gradekit_core::lattice::{equivalence_report, grade_matrix, matrix_violations, lattice, GradeMatrix, Regime};
use gradekit_core::relativity::{
    galois_c, galois_e, is_near_correspondence, is_relativeness_correspondence, maximal_extension,
    quotient_automorphisms, Correspondence, QuotientView,
};
use gradekit_core::symmetry::{find_automorphism, find_isomorphism, is_automorphism, Permutation};
use gradekit_core::{gallery, GradeId, Language, Signature, Structure, Symbol};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn verdict(failures: &[String], detail: impl Into<String>) -> Outcome {
    let mut detail = detail.into();
    if !failures.is_empty() {
        detail += &format!("; {} failure(s), first: {}", failures.len(), failures[0]);
    }
    Outcome { ok: failures.is_empty(), detail }
}

fn rel_sig(k: usize) -> Signature {
    match k % 4 {
        0 => Signature::relational(&[("R", 2)]),
        1 => Signature::relational(&[("P", 1), ("R", 2)]),
        2 => Signature::relational(&[("R", 2), ("S", 2)]),
        _ => Signature::relational(&[("P", 1), ("Q", 1), ("R", 2)]),
    }
    .unwrap()
}

fn func_sig(k: usize) -> Signature {
    let preds = match k % 3 {
        0 => vec![],
        1 => vec![Symbol::new("P", 1)],
        _ => vec![Symbol::new("R", 2)],
    };
    Signature::new(preds, vec![Symbol::new("f", 1)]).unwrap()
}

/// The structures of criterion 2, shared by 4 to 7 and 9.
struct Sample {
    s: Structure,
    m: GradeMatrix,
}

fn stream(r: &mut ChaCha8Rng) -> Vec<Structure> {
    let densities = [0.2, 0.5, 0.8];
    let mut out = Vec::new();
    for k in 0..300 {
        let size = r.gen_range(2..=7);
        let spec = RandomSpec::new(rel_sig(k), densities[k % 3]);
        out.push(random_structure_with(r, size, &spec).unwrap());
    }
    for k in 0..200 {
        let size = r.gen_range(2..=6);
        let spec = RandomSpec::new(func_sig(k), densities[k % 3]);
        out.push(random_structure_with(r, size, &spec).unwrap());
    }
    out
}

fn el(s: &Structure, n: &str) -> usize {
    s.element(n).unwrap()
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut check = |label: &str, ok: bool| {
        if !ok {
            fails.push(label.to_string());
        }
    };
    let grade = |s: &Structure, g: GradeId, a: &str, b: &str| grade_matrix(s, 12).unwrap().get(g, el(s, a), el(s, b));
    use GradeId::*;

    let a = gallery::a();
    check("A: 1 ≈⁻ 2 and 1 ≠ 2", grade(&a, IndiscNeqFull, "1", "2") && !grade(&a, Id, "1", "2"));
    let b = gallery::b();
    check("B: 1 ≈ₜ 2 and not 1 ≈⁻ 2", grade(&b, SymTotal, "1", "2") && !grade(&b, IndiscNeqFull, "1", "2"));
    let c = gallery::c();
    check("C: 1 ~ₜ 2 and not 1 ≈⁼ₘ 2", grade(&c, RelTotal, "1", "2") && !grade(&c, IndiscEqMon, "1", "2"));
    let d = gallery::d();
    check("D: 1 ≈b 2 and not 1 ≈⁻ₚ 2", grade(&d, SymBare, "1", "2") && !grade(&d, IndiscNeqPair, "1", "2"));
    check("D: 1 ≈ₚ 3 and not 1 ~ₜ 3", grade(&d, SymPair, "1", "3") && !grade(&d, RelTotal, "1", "3"));

    let f = gallery::f();
    let v = QuotientView::new(&f).unwrap();
    let swap = Correspondence::from_pairs([(0, 1), (1, 0)]);
    check(
        "F: swap is a near-correspondence but not a relativeness correspondence",
        is_near_correspondence(&v, &v, &swap) && !is_relativeness_correspondence(&f, &f, &swap),
    );

    let g = gallery::g();
    check(
        "G: 1 ≈ₚ 2, 2 ≈ₚ 3, not 1 ≈⁻ₚ 3",
        grade(&g, SymPair, "1", "2") && grade(&g, SymPair, "2", "3") && !grade(&g, IndiscNeqPair, "1", "3"),
    );

    let i = gallery::i();
    check("I: 1 ≈ₜ 2 and not 7 ≈b 8", grade(&i, SymTotal, "1", "2") && !grade(&i, SymBare, "7", "8"));
    let o = TypeOracle::new(&i, Language::WithoutIdentity, 2, 2).unwrap();
    let (e1, e2, e4, e7, e8) = (el(&i, "1"), el(&i, "2"), el(&i, "4"), el(&i, "7"), el(&i, "8"));
    check("I: depth-2 L⁻ agreement on (1,2)/(7,8)", o.agree(&[e1, e2], &[e7, e8]));
    check("I: depth-2 L⁻ agreement on (1,4)/(1,7)", o.agree(&[e1, e4], &[e1, e7]));
    // The same agreements against plain enumeration of small formulas.
    let small = enumerate_formulas(i.signature(), &["x", "y"], &EnumBounds { cap: 5_000_000, ..EnumBounds::new(2, 2) }, Language::WithoutIdentity).unwrap();
    let mut env = Vec::new();
    let disagree = small.iter().find(|phi| {
        let c = Compiled::new(i.signature(), phi, &["x", "y"]).unwrap();
        c.eval_with(&i, &[e1, e2], &mut env) != c.eval_with(&i, &[e7, e8], &mut env)
            || c.eval_with(&i, &[e1, e4], &mut env) != c.eval_with(&i, &[e1, e7], &mut env)
    });
    check("I: enumerated formulas agree", disagree.is_none());

    let t = start.elapsed();
    check("runtime under 30 s", t < Duration::from_secs(30));
    verdict(&fails, format!("7 gallery structures, {} enumerated formulas on I, {:.1?}", small.len(), t))
}

fn finite_regime(s: &Structure) -> Regime {
    if s.signature().is_relational() {
        Regime::FiniteRelational
    } else {
        Regime::FiniteArbitrary
    }
}

fn criterion2(samples: &[Sample], elapsed: Duration) -> Outcome {
    let mut fails = Vec::new();
    for (k, x) in samples.iter().enumerate() {
        let vs = matrix_violations(&x.m, &lattice(finite_regime(&x.s)));
        if let Some(v) = vs.first() {
            fails.push(format!("structure #{k}: {v}"));
        }
    }
    let t = elapsed;
    if t >= Duration::from_secs(120) {
        fails.push(format!("runtime {t:.1?} over 120 s"));
    }
    verdict(&fails, format!("{} structures (300 relational, 200 with a unary function), {t:.1?}", samples.len()))
}

/// A total, surjective random subset of `full`.
fn random_sub(r: &mut ChaCha8Rng, full: &Correspondence, n: usize) -> Correspondence {
    let pairs: Vec<(usize, usize)> = full.iter().collect();
    let mut out = Correspondence::new();
    for a in 0..n {
        let row: Vec<_> = pairs.iter().filter(|p| p.0 == a).collect();
        let &&(x, y) = row.choose(r).unwrap();
        out.insert(x, y);
    }
    for b in 0..n {
        let col: Vec<_> = pairs.iter().filter(|p| p.1 == b).collect();
        let &&(x, y) = col.choose(r).unwrap();
        out.insert(x, y);
    }
    for &(x, y) in &pairs {
        if r.gen_bool(0.3) {
            out.insert(x, y);
        }
    }
    out
}

/// Two disjoint copies of a relational structure.
fn doubled(s: &Structure) -> Structure {
    let n = s.size();
    let names = (1..=2 * n).map(|i| i.to_string()).collect();
    let relations = (0..s.signature().predicates().len())
        .map(|p| {
            s.tuples(p)
                .flat_map(|t| [t.clone(), t.iter().map(|&e| e + n).collect()])
                .collect()
        })
        .collect();
    Structure::from_parts(s.signature().clone(), names, relations, vec![]).unwrap()
}

fn criterion3(r: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut autos_checked = 0;
    let mut probes = 0;
    for k in 0..100 {
        let size = r.gen_range(2..=6);
        let d = [0.1, 0.4, 0.9][k % 3];
        let spec = if k % 2 == 0 { RandomSpec::new(rel_sig(k / 2), d) } else { RandomSpec::new(func_sig(k / 2), d) };
        let mut s = random_structure_with(r, size, &spec).unwrap();
        if k % 4 == 0 {
            s = doubled(&random_structure_with(r, size.min(3), &spec).unwrap());
        }
        let v = QuotientView::new(&s).unwrap();
        let n = s.size();
        for pi in quotient_automorphisms(&v, 50) {
            autos_checked += 1;
            let e = galois_e(&v, &v, &pi).unwrap();
            if galois_c(&v, &v, &e).ok().as_ref() != Some(&pi) {
                fails.push(format!("#{k}: c(e(π)) ≠ π"));
            }
            if !is_relativeness_correspondence(&s, &s, &e) {
                fails.push(format!("#{k}: e(π) is not a relativeness correspondence"));
            }
            for a in 0..n {
                for b in 0..n {
                    if !e.contains(a, b) {
                        let mut bigger = e.clone();
                        bigger.insert(a, b);
                        if is_near_correspondence(&v, &v, &bigger) {
                            fails.push(format!("#{k}: e(π) not maximal"));
                        }
                    }
                }
            }
            for _ in 0..20 {
                let sub = random_sub(r, &e, n);
                if !is_near_correspondence(&v, &v, &sub) {
                    fails.push(format!("#{k}: total surjective subset of e(π) is not near"));
                    continue;
                }
                let ext = maximal_extension(&v, &v, &sub).unwrap();
                if ext != e || maximal_extension(&v, &v, &ext).unwrap() != ext || !sub.is_subset(&ext) {
                    fails.push(format!("#{k}: e∘c not idempotent or not the extension"));
                }
                if n <= 4 {
                    // Any pair that keeps `sub` near must already be in its
                    // maximal extension.
                    for a in 0..n {
                        for b in 0..n {
                            let mut probe = sub.clone();
                            if probe.insert(a, b) {
                                probes += 1;
                                if is_near_correspondence(&v, &v, &probe) && !ext.contains(a, b) {
                                    fails.push(format!("#{k}: a second maximal extension"));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    verdict(
        &fails,
        format!("100 structures, {autos_checked} quotient automorphisms, {probes} uniqueness probes, {:.1?}", start.elapsed()),
    )
}

fn criterion4(samples: &[Sample]) -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut separated = [0usize; 4];
    for (k, x) in samples.iter().enumerate() {
        let s = &x.s;
        let n = s.size();
        for (li, lang) in [Language::WithIdentity, Language::WithoutIdentity].into_iter().enumerate() {
            let one = TypeOracle::new(s, lang, 1, 2).unwrap();
            let two = TypeOracle::new(s, lang, 2, 2).unwrap();
            let (bare, pair) = if li == 0 { (GradeId::SymBare, GradeId::SymPair) } else { (GradeId::RelBare, GradeId::RelPair) };
            for a in 0..n {
                for b in 0..n {
                    if !one.agree(&[a], &[b]) {
                        separated[2 * li] += 1;
                        if x.m.get(bare, a, b) {
                            fails.push(format!("#{k} ({a},{b}): {lang} separator but {bare} holds"));
                        }
                    }
                    if !two.agree(&[a, b], &[b, a]) {
                        separated[2 * li + 1] += 1;
                        if x.m.get(pair, a, b) {
                            fails.push(format!("#{k} ({a},{b}): {lang} separator but {pair} holds"));
                        }
                    }
                }
            }
        }
    }
    verdict(
        &fails,
        format!(
            "separated pairs: L= mon {} pair {}, L- mon {} pair {}; {:.1?}",
            separated[0],
            separated[1],
            separated[2],
            separated[3],
            start.elapsed()
        ),
    )
}

fn criterion5(samples: &[Sample], r: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut evals = 0;
    for (k, x) in samples.iter().enumerate() {
        let s = &x.s;
        let q = quotient(s).unwrap();
        let mut env = Vec::new();
        for _ in 0..50 {
            let depth = r.gen_range(0..=3);
            let phi = random_formula(r, s.signature(), &["x", "y"], depth, Language::WithoutIdentity);
            let c = Compiled::new(s.signature(), &phi, &["x", "y"]).unwrap();
            for _ in 0..10 {
                let (a, b) = (r.gen_range(0..s.size()), r.gen_range(0..s.size()));
                evals += 1;
                let here = c.eval_with(s, &[a, b], &mut env);
                let there = c.eval_with(&q.quotient, &[q.class_of[a], q.class_of[b]], &mut env);
                if here != there {
                    fails.push(format!("#{k}: {phi} at ({a},{b})"));
                }
            }
        }
    }
    verdict(&fails, format!("{evals} evaluations, {:.1?}", start.elapsed()))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                go(n, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn criterion6(samples: &[Sample], r: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut structures = 0;
    let mut queries = 0;
    for (k, x) in samples.iter().enumerate() {
        let s = &x.s;
        if s.size() > 5 {
            continue;
        }
        structures += 1;
        let autos: Vec<Permutation> =
            permutations(s.size()).into_iter().map(Permutation).filter(|p| is_automorphism(s, p)).collect();
        for _ in 0..200 {
            queries += 1;
            let c = random_constraint(r, s.size());
            let expect = autos.iter().find(|p| c.admits(p));
            let got = find_automorphism(s, &c);
            if got.as_ref() != expect {
                fails.push(format!("#{k} {c:?}: search {got:?}, brute force {expect:?}"));
            }
        }
    }
    verdict(&fails, format!("{structures} structures of size ≤ 5, {queries} constrained searches, {:.1?}", start.elapsed()))
}

fn criterion7(samples: &[Sample]) -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    let (mut sym_checked, mut rel_checked, mut unresolved) = (0, 0, 0);
    for (k, x) in samples.iter().enumerate() {
        let s = &x.s;
        if s.signature().is_relational() {
            let sig = s.signature();
            let p = sig.predicates().iter().map(|p| p.arity - 1).max().unwrap_or(0);
            let set = capture_set_sym_total(sig, p);
            sym_checked += 1;
            if !verify_capture(s, GradeId::SymTotal, &set).unwrap().is_captured() {
                fails.push(format!("#{k}: symTotal not captured"));
            }
        }
        match defining_formula(s, 3) {
            Ok(eps) => {
                let c = Compiled::new(s.signature(), &eps, &["x", "y"]).unwrap();
                let part = full_indisc(s).unwrap();
                for a in 0..s.size() {
                    for b in 0..s.size() {
                        if c.eval(s, &[a, b]) != part.same(a, b) {
                            fails.push(format!("#{k}: defining formula wrong at ({a},{b})"));
                        }
                    }
                }
                rel_checked += 1;
                let set = capture_set_rel_total(s, 3).unwrap();
                if !verify_capture(s, GradeId::RelTotal, &set).unwrap().is_captured() {
                    fails.push(format!("#{k}: relTotal not captured"));
                }
            }
            Err(IndiscError::DepthCap(..)) => unresolved += 1,
            Err(e) => fails.push(format!("#{k}: {e}")),
        }
    }
    let total = samples.len();
    if unresolved * 20 >= total {
        fails.push(format!("{unresolved} of {total} unresolved within depth 3"));
    }
    verdict(
        &fails,
        format!(
            "symTotal on {sym_checked}, relTotal and defining formula on {rel_checked}, {unresolved} unresolved; {:.1?}",
            start.elapsed()
        ),
    )
}

fn criterion8(r: &mut ChaCha8Rng) -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();
    for k in 0..100 {
        let size = r.gen_range(1..=6);
        let spec = if k % 2 == 0 { RandomSpec::new(rel_sig(k / 2), 0.4) } else { RandomSpec::new(func_sig(k / 2), 0.4) };
        let s = random_structure_with(r, size, &spec).unwrap();
        let a = r.gen_range(0..size);
        let copies = r.gen_range(1..=3);
        let inf = inflate(&s, a, copies).unwrap();
        let part = full_indisc(&inf.extended).unwrap();
        if !inf.clones.iter().all(|&d| part.same(a, d)) {
            fails.push(format!("#{k}: a clone is discernible from its original"));
        }
        let (qs, qn) = (quotient(&s).unwrap(), quotient(&inf.extended).unwrap());
        if find_isomorphism(&qs.quotient, &qn.quotient, &Default::default()).is_none() {
            fails.push(format!("#{k}: quotients not isomorphic"));
        }
        let id: Vec<usize> = (0..size).collect();
        if !is_elementary_ext_noid(&s, &inf.extended, &id).unwrap() {
            fails.push(format!("#{k}: not an elementary extension"));
        }
    }
    let mut pairs = 0;
    let mut structures = gallery::all();
    structures.push(("K-analogue", gallery::finite_k_analogue()));
    for (name, s) in &structures {
        for a in 0..s.size() {
            for b in 0..s.size() {
                pairs += 1;
                if !check_ext_total(s, a, b).unwrap() {
                    fails.push(format!("{name} ({a},{b}): total lemma fails"));
                }
            }
        }
    }
    let mut mains = 0;
    let mut k = 0;
    while mains < 50 {
        k += 1;
        let size = r.gen_range(2..=6);
        let spec = if k % 2 == 0 { RandomSpec::new(rel_sig(k), 0.4) } else { RandomSpec::new(func_sig(k), 0.4) };
        let s = random_structure_with(r, size, &spec).unwrap();
        let (a, b) = (r.gen_range(0..size), r.gen_range(0..size));
        if full_indisc(&s).unwrap().same(a, b) {
            continue;
        }
        mains += 1;
        if !check_ext_main(&s, a, b).unwrap() {
            fails.push(format!("main lemma fails on random structure {k} ({a},{b})"));
        }
    }
    let t = start.elapsed();
    if t >= Duration::from_secs(60) {
        fails.push(format!("runtime {t:.1?} over 60 s"));
    }
    verdict(&fails, format!("100 inflations, {pairs} gallery pairs, {mains} discernible pairs; {t:.1?}"))
}

fn criterion9(samples: &[Sample]) -> Outcome {
    let mut fails = Vec::new();
    let mut count = 0;
    let gallery_matrices: Vec<(String, GradeMatrix)> =
        gallery::all().into_iter().map(|(n, s)| (n.to_string(), grade_matrix(&s, 12).unwrap())).collect();
    let all = samples
        .iter()
        .enumerate()
        .map(|(k, x)| (format!("#{k}"), &x.m))
        .chain(gallery_matrices.iter().map(|(n, m)| (n.clone(), m)));
    for (name, m) in all {
        count += 1;
        for st in equivalence_report(m) {
            if st.grade.is_equivalence() && !st.is_equivalence() {
                fails.push(format!("{name}: {} is not an equivalence", st.grade));
            }
        }
    }
    let g = gallery::g();
    let report = equivalence_report(&grade_matrix(&g, 12).unwrap());
    for g in GradeId::PAIRWISE {
        let st = report.iter().find(|st| st.grade == g).unwrap();
        if st.transitive || st.transitivity_counterexample.is_none() {
            fails.push(format!("G does not witness non-transitivity of {g}"));
        }
    }
    verdict(&fails, format!("{count} matrices; G breaks transitivity of all four pairwise grades"))
}

fn main() -> ExitCode {
    let mut results: Vec<(usize, Outcome)> = Vec::new();
    results.push((1, criterion1()));

    let mut r = rng(20_240_601);
    let start = Instant::now();
    let structures = stream(&mut r);
    let samples: Vec<Sample> = structures.into_iter().map(|s| Sample { m: grade_matrix(&s, 12).unwrap(), s }).collect();
    let elapsed = start.elapsed();
    results.push((2, criterion2(&samples, elapsed)));
    results.push((3, criterion3(&mut r)));
    results.push((4, criterion4(&samples)));
    results.push((5, criterion5(&samples, &mut r)));
    results.push((6, criterion6(&samples, &mut r)));
    results.push((7, criterion7(&samples)));
    results.push((8, criterion8(&mut r)));
    results.push((9, criterion9(&samples)));

    let mut ok = true;
    for (n, o) in &results {
        println!("[{}] criterion {n}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        ok &= o.ok;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
