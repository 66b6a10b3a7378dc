//! The acceptance criteria, one test each. Run with `--nocapture` to see the
//! detail line every criterion prints.

mod common;

use std::collections::HashMap;
use std::fs;
use std::time::{Duration, Instant};

use seqlogic::arith::{
    deep_stack, godel_decode, godel_encode, rosser_sentence, sub_oracle, threshold, witness_compare, ArithContext,
};
use seqlogic::complexity::{class_member, profile, ClassId};
use seqlogic::fol::{alpha_eq, parse_lenient, Formula, Var};
use seqlogic::models::check_fundamental;
use seqlogic::satgen::measure_constants;
use seqlogic::testgen::{
    countermodel, mutate_proof, random_comparison, random_fundamental_case, random_rosser_input, random_translation,
    rng, FormulaShape, TranslationKind,
};

use common::{golden_dir, proof_corpus};

fn report(n: u32, title: &str, failures: &[String], detail: String) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {n:>2} {verdict} {title}: {detail}");
    for f in failures.iter().take(5) {
        println!("    {f}");
    }
    assert!(failures.is_empty(), "criterion {n} failed with {} counterexamples", failures.len());
}

fn within(limit: Duration, start: Instant, failures: &mut Vec<String>) -> Duration {
    let took = start.elapsed();
    if took > limit {
        failures.push(format!("took {took:?}, limit {limit:?}"));
    }
    took
}

const CORPUS_SEED: u64 = 1;
const CORPUS_SIZE: usize = 10_000;

/// Random relational formulas of depth at most 8 over four predicates.
fn measure_corpus() -> Vec<Formula> {
    let shape = FormulaShape::relational(8);
    let mut r = rng(CORPUS_SEED);
    (0..CORPUS_SIZE).map(|_| shape.formula(&mut r)).collect()
}

#[test]
fn criterion_01_measure_oracle_agreement() {
    let start = Instant::now();
    let corpus = measure_corpus();
    let mut failures = Vec::new();
    let mut checks = 0;
    for f in &corpus {
        let p = profile(f);
        for level in 0..=10 {
            let sigma = class_member(f, ClassId::sigma(level));
            let pi = class_member(f, ClassId::pi(level));
            let delta = class_member(f, ClassId::delta(level));
            checks += 3;
            if sigma != (p.rho_e <= level) || pi != (p.rho_a <= level) || delta != (p.rho0 <= level) {
                failures.push(format!("level {level}: {f} ({p}) sigma {sigma} pi {pi} delta {delta}"));
            }
            if delta != (sigma && pi) {
                failures.push(format!("level {level}: Delta* differs from Sigma* and Pi* on {f}"));
            }
        }
    }
    let took = within(Duration::from_secs(60), start, &mut failures);
    report(1, "measure/oracle agreement", &failures, format!("{} formulas, {checks} memberships, {took:.1?}", corpus.len()));
}

#[test]
fn criterion_02_parse_tree_example() {
    let f = parse_lenient("forall x. ((forall y. exists z. P(x,y,z)) -> exists u. exists v. Q(x,u,v))").unwrap();
    let p = profile(&f);
    let failures = if p.rho_e == 4 { vec![] } else { vec![format!("rhoE = {}", p.rho_e)] };
    report(2, "parse-tree example", &failures, p.to_string());
}

#[test]
fn criterion_03_lipschitz() {
    let corpus = measure_corpus();
    let failures: Vec<String> = corpus
        .iter()
        .filter_map(|f| {
            let p = profile(f);
            (p.rho_e.abs_diff(p.rho_a) > 1).then(|| format!("{f}: {p}"))
        })
        .collect();
    report(3, "|rhoE - rhoA| <= 1", &failures, format!("{} formulas", corpus.len()));
}

#[test]
fn criterion_04_translation_bound() {
    let mut r = rng(4);
    let shape = FormulaShape::new(&[("F", 1), ("G", 2)], &["x", "y", "z"], 5);
    let mut failures = Vec::new();
    let total = 1200;
    for i in 0..total {
        let kind = TranslationKind::ALL[i % TranslationKind::ALL.len()];
        let tau = random_translation(&mut r, kind, 3);
        let a = shape.formula(&mut r);
        let translated = tau.apply(&a, None).unwrap();
        let (pa, pt, star) = (profile(&a), profile(&translated), tau.rho_star());
        if pt.rho_e > pa.rho_e + star || pt.rho_a > pa.rho_a + star {
            failures.push(format!("{kind:?} dim {}: {a} ({pa}) -> {pt}, rho* {star}", tau.dim()));
        }
    }
    report(4, "translation bound", &failures, format!("{total} pairs over all translation kinds, dims <= 3"));
}

#[test]
fn criterion_05_fundamental_lemma() {
    let start = Instant::now();
    let mut r = rng(5);
    let mut failures = Vec::new();
    let total = 600;
    let mut per_kind: HashMap<TranslationKind, usize> = HashMap::new();
    for i in 0..total {
        let kind = TranslationKind::ALL[i % TranslationKind::ALL.len()];
        let c = random_fundamental_case(&mut r, kind, 3, 3);
        *per_kind.entry(kind).or_default() += 1;
        match check_fundamental(&c.model, &c.translation, &c.sentence, c.params.as_deref()) {
            Ok(true) => {}
            Ok(false) => failures.push(format!("{kind:?}: {} on\n{}", c.sentence, c.model.to_text())),
            Err(e) => failures.push(format!("{kind:?}: {e}")),
        }
    }
    let took = within(Duration::from_secs(120), start, &mut failures);
    let mut kinds: Vec<String> = per_kind.iter().map(|(k, n)| format!("{k:?} {n}")).collect();
    kinds.sort();
    report(5, "fundamental lemma", &failures, format!("{total} cases ({}), {took:.1?}", kinds.join(", ")));
}

#[test]
fn criterion_06_satgen_growth() {
    // sat_{n+1} for n up to 6
    let r = measure_constants(7).unwrap();
    let mut failures = Vec::new();
    let sat = &r.families[0];
    let steps: Vec<i64> = sat.rho.windows(2).filter(|w| w[0].0 >= 2).map(|w| i64::from(w[1].1) - i64::from(w[0].1)).collect();
    if steps.windows(2).any(|w| w[0] != w[1]) {
        failures.push(format!("sat rho steps from n = 2: {steps:?}"));
    }
    if !r.optimized_symbols_linear {
        failures.push(format!("optimized symbol counts {:?}", sat.symbols));
    }
    if !r.naive_symbols_superlinear {
        failures.push(format!("naive symbol counts {:?}", r.families[1].symbols));
    }
    for name in ["Jstar", "Im"] {
        let fam = r.families.iter().find(|f| f.name == name).unwrap();
        let residuals: Vec<i64> =
            fam.rho.iter().filter(|(n, _)| *n >= 2).map(|&(n, rho)| i64::from(rho) - r.c0 * i64::from(n)).collect();
        if residuals.windows(2).any(|w| w[0] != w[1]) {
            failures.push(format!("{name} residuals against slope {}: {residuals:?}", r.c0));
        }
    }
    report(
        6,
        "satgen growth laws",
        &failures,
        format!("rho(sat_n) = {}n + {}, Jstar + {}, Im + {}", r.c0, r.c1, r.c7, r.c10),
    );
}

#[test]
fn criterion_07_rosser_budget() {
    let (failures, total) = deep_stack(|| {
        let mut r = rng(7);
        let mut failures = Vec::new();
        let total = 1000;
        for _ in 0..total {
            let input = random_rosser_input(&mut r);
            let ctx = ArithContext::standard().with_rho(input.sub_rho0, input.prov_rho0).unwrap();
            let u = Var::new("u", 0);
            let b = Formula::exists(u.clone(), Formula::and(ctx.numbers.delta_on(&[u]), input.target.clone()));
            let n = threshold(&ctx, &input.axioms, &b);
            let rs = match rosser_sentence(&input.axioms, &input.target, n, &ctx) {
                Ok(rs) => rs,
                Err(e) => {
                    failures.push(format!("{}: {e}", input.target));
                    continue;
                }
            };
            let rho0 = ctx.profile(&rs.sentence).rho0;
            let budget = input.sub_rho0.max(input.prov_rho0) + ctx.scheme_rho0.max(ctx.profile(&input.target).rho0) + 3;
            if rho0 > budget {
                failures.push(format!("{}: rho0(R) = {rho0} > {budget}", input.target));
            }
            let code = &rs.diagonal_code;
            if sub_oracle(code, code, &ctx).unwrap() != godel_encode(&rs.sentence) {
                failures.push(format!("{}: diagonal check fails", input.target));
            }
        }
        (failures, total)
    });
    report(7, "Rosser budget and diagonal", &failures, format!("{total} inputs"));
}

fn golden_fields(text: &str) -> HashMap<&str, &str> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .filter_map(|l| l.split_once(' '))
        .collect()
}

#[test]
fn criterion_08_witness_comparison() {
    let ctx = ArithContext::standard();
    let mut failures = Vec::new();
    let mut files: Vec<_> = fs::read_dir(golden_dir("witness")).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    for path in &files {
        let text = fs::read_to_string(path).unwrap();
        let g = golden_fields(&text);
        let name = path.file_name().unwrap().to_string_lossy();
        let w = witness_compare(
            &parse_lenient(g["left"]).unwrap(),
            &parse_lenient(g["right"]).unwrap(),
            g["strict"] == "true",
            &ctx,
        )
        .unwrap();
        let got = w.formula(&ctx).unwrap().to_string();
        if got != g["formula"] {
            failures.push(format!("{name}: formula\n      got  {got}\n      want {}", g["formula"]));
        }
        let dual = w.dual().formula(&ctx).unwrap().to_string();
        if dual != g["dual"] {
            failures.push(format!("{name}: dual\n      got  {dual}\n      want {}", g["dual"]));
        }
    }
    if files.is_empty() {
        failures.push("no golden files".into());
    }
    let mut r = rng(8);
    let pairs = 1000;
    for _ in 0..pairs {
        let w = random_comparison(&mut r, &ctx);
        let d = w.dual();
        if d.dual() != w || d.left != w.right || d.strict == w.strict {
            failures.push(format!("dual of {} vs {}", w.left, w.right));
        }
    }
    report(8, "witness-comparison duals", &failures, format!("{} golden files, {pairs} random pairs", files.len()));
}

#[test]
fn criterion_09_proof_checker() {
    let corpus = proof_corpus();
    let mut failures = Vec::new();
    if corpus.len() != 50 {
        failures.push(format!("corpus has {} proofs", corpus.len()));
    }
    for (name, p) in &corpus {
        if let Err(e) = p.check() {
            failures.push(format!("{name} rejected: {e}"));
            continue;
        }
        let theorem = p.theorem.as_ref().unwrap_or_else(|| &p.steps.last().unwrap().sequent);
        match countermodel(theorem, 3) {
            Ok(None) => {}
            Ok(Some((m, a))) => failures.push(format!("{name} unsound: {a:?} in\n{}", m.to_text())),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    let mut r = rng(9);
    let (mut mutations, mut attempts) = (0, 0);
    while mutations < 200 && attempts < 20_000 {
        attempts += 1;
        let (name, p) = &corpus[attempts % corpus.len()];
        let Some(m) = mutate_proof(&mut r, p) else { continue };
        mutations += 1;
        if m.proof.check().is_ok() {
            failures.push(format!("{name}: accepted after step {}: {}", m.step + 1, m.description));
        }
    }
    if mutations < 200 {
        failures.push(format!("only {mutations} mutations found"));
    }
    report(9, "proof checker", &failures, format!("{} golden proofs, {mutations} mutations rejected", corpus.len()));
}

#[test]
fn criterion_10_round_trips() {
    let shape = FormulaShape::relational(8);
    let mut r = rng(10);
    let corpus: Vec<Formula> = (0..1000).map(|_| shape.formula(&mut r)).collect();
    let mut failures = Vec::new();
    let mut codes: HashMap<_, &Formula> = HashMap::new();
    for f in &corpus {
        match parse_lenient(&f.to_string()) {
            Ok(g) if g == *f => {}
            other => failures.push(format!("print/parse: {f} -> {other:?}")),
        }
        let code = godel_encode(f);
        match godel_decode(&code) {
            Ok(g) if alpha_eq(&g, f) => {}
            other => failures.push(format!("encode/decode: {f} -> {other:?}")),
        }
        if let Some(prev) = codes.insert(code, f) {
            if !alpha_eq(prev, f) {
                failures.push(format!("code collision: {prev} and {f}"));
            }
        }
    }
    report(10, "round-trips", &failures, format!("{} formulas, {} distinct codes", corpus.len(), codes.len()));
}
