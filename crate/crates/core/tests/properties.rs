//! Property tests over seeded generators: proptest picks the seed, the
//! generators in `seqlogic::testgen` build the structure.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use seqlogic::arith::{godel_decode, godel_encode, threshold_values, ArithContext};
use seqlogic::complexity::{class_member, nu, profile, ClassId};
use seqlogic::fol::{alpha_eq, parse_lenient, substitute, Formula, Signature, Term, Var};
use seqlogic::models::{check_fundamental, eval, find_isomorphism, internal_model, Assignment};
use seqlogic::testgen::{
    mutate_proof, random_comparison, random_fundamental_case, random_model, random_proof, random_translation, rng,
    FormulaShape, TranslationKind,
};
use seqlogic::translations::{compose, slot, Translation, TranslationSpec};

fn relational(seed: u64, depth: u32) -> Formula {
    FormulaShape::relational(depth).formula(&mut rng(seed))
}

/// Renames every bound variable to a name that never occurs in generated formulas.
fn rename_bound(f: &Formula) -> Formula {
    match f {
        Formula::Forall(v, a) | Formula::Exists(v, a) => {
            let fresh = Var::new(format!("{}r", v.name), v.index);
            let body = substitute(&rename_bound(a), v, &Term::var(&fresh));
            if matches!(f, Formula::Forall(..)) {
                Formula::forall(fresh, body)
            } else {
                Formula::exists(fresh, body)
            }
        }
        Formula::Not(a) => Formula::not(rename_bound(a)),
        Formula::And(a, b) => Formula::and(rename_bound(a), rename_bound(b)),
        Formula::Or(a, b) => Formula::or(rename_bound(a), rename_bound(b)),
        Formula::Implies(a, b) => Formula::implies(rename_bound(a), rename_bound(b)),
        _ => f.clone(),
    }
}

fn target_sig() -> Signature {
    Signature::with_preds("tgt", &[("P", 1), ("R", 2)]).unwrap()
}

/// A one-dimensional translation of `{P/1, R/2}` into itself, drawn from a
/// small pool of images.
fn self_translation(r: &mut impl Rng) -> Translation {
    let (s0, s1, w) = (slot(0), slot(1), Var::new("w", 0));
    let domains = [
        Formula::Top,
        Formula::atom_vars("P", [&s0]),
        Formula::not(Formula::atom_vars("P", [&s0])),
        Formula::exists(w.clone(), Formula::atom_vars("R", [&s0, &w])),
    ];
    let unary = [
        Formula::atom_vars("P", [&s0]),
        Formula::not(Formula::atom_vars("P", [&s0])),
        Formula::exists(w.clone(), Formula::atom_vars("R", [&w, &s0])),
    ];
    let binary = [
        Formula::atom_vars("R", [&s0, &s1]),
        Formula::atom_vars("R", [&s1, &s0]),
        Formula::and(Formula::atom_vars("P", [&s0]), Formula::atom_vars("R", [&s0, &s1])),
        Formula::eq_vars(&s0, &s1),
    ];
    let pick = |r: &mut _, pool: &[Formula]| pool.choose(r).unwrap().clone();
    let spec = TranslationSpec::new("v", target_sig(), target_sig(), 1, pick(r, &domains))
        .pred("P", pick(r, &unary))
        .pred("R", pick(r, &binary));
    Translation::new(spec).unwrap()
}

fn source_sentence(r: &mut impl Rng, depth: u32) -> Formula {
    FormulaShape::new(&[("F", 1), ("G", 2)], &["x", "y", "z"], depth).sentence(r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let f = relational(seed, 6);
        prop_assert_eq!(parse_lenient(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn encode_decode_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let shape = FormulaShape::relational(5);
        let (f, g) = (shape.formula(&mut r), shape.formula(&mut r));
        let code = godel_encode(&f);
        prop_assert!(alpha_eq(&godel_decode(&code).unwrap(), &f));
        prop_assert_eq!(code == godel_encode(&g), f == g);
    }

    #[test]
    fn lipschitz_and_cumulation(seed in any::<u64>()) {
        let f = relational(seed, 8);
        let p = profile(&f);
        prop_assert!(p.rho_e.abs_diff(p.rho_a) <= 1);
        prop_assert_eq!(p.rho, p.rho_e);
        prop_assert_eq!(p.rho0, p.rho_e.max(p.rho_a));
        for n in 0..9 {
            let sigma = class_member(&f, ClassId::sigma(n));
            let pi = class_member(&f, ClassId::pi(n));
            let (sigma1, pi1) = (class_member(&f, ClassId::sigma(n + 1)), class_member(&f, ClassId::pi(n + 1)));
            if sigma || pi {
                prop_assert!(sigma1 && pi1, "level {}: {}", n, f);
            }
            prop_assert_eq!(class_member(&f, ClassId::delta(n + 1)), sigma1 && pi1);
        }
    }

    #[test]
    fn measures_ignore_bound_names(seed in any::<u64>()) {
        let f = relational(seed, 7);
        let g = rename_bound(&f);
        prop_assert!(alpha_eq(&f, &g), "{} vs {}", f, g);
        prop_assert_eq!(profile(&f), profile(&g));
        prop_assert_eq!(nu(&f), nu(&g));
    }

    #[test]
    fn substitution_lemma(seed in any::<u64>()) {
        let mut r = rng(seed);
        let shape = FormulaShape::relational(5);
        let f = shape.formula(&mut r);
        let size = r.gen_range(1..=3);
        let m = random_model(&mut r, &shape.signature(), size);
        let a: Assignment = shape.vars.iter().map(|v| (v.clone(), r.gen_range(0..size))).collect();
        let v = shape.vars.choose(&mut r).unwrap();
        let t = shape.vars.choose(&mut r).unwrap();
        let mut shifted = a.clone();
        shifted.insert(v.clone(), a[t]);
        let lhs = eval(&m, &substitute(&f, v, &Term::var(t)), &a).unwrap();
        prop_assert_eq!(lhs, eval(&m, &f, &shifted).unwrap());
    }

    #[test]
    fn free_variables_after_fresh_substitution(seed in any::<u64>()) {
        let mut r = rng(seed);
        let shape = FormulaShape::relational(6);
        let f = shape.formula(&mut r);
        let v = shape.vars.choose(&mut r).unwrap();
        let fresh = Var::new("fresh", 0);
        let mut expected = f.free_vars();
        if expected.remove(v) {
            expected.insert(fresh.clone());
        }
        prop_assert_eq!(substitute(&f, v, &Term::var(&fresh)).free_vars(), expected);
    }

    #[test]
    fn translation_bound(seed in any::<u64>(), kind in 0..TranslationKind::ALL.len()) {
        let mut r = rng(seed);
        let tau = random_translation(&mut r, TranslationKind::ALL[kind], 3);
        let a = FormulaShape::new(&[("F", 1), ("G", 2)], &["x", "y", "z"], 5).formula(&mut r);
        let (pa, pt) = (profile(&a), profile(&tau.apply(&a, None).unwrap()));
        prop_assert!(pt.rho_e <= pa.rho_e + tau.rho_star());
        prop_assert!(pt.rho_a <= pa.rho_a + tau.rho_star());
    }

    #[test]
    fn translation_commutes_with_connectives(seed in any::<u64>(), kind in 0..TranslationKind::ALL.len()) {
        let mut r = rng(seed);
        let tau = random_translation(&mut r, TranslationKind::ALL[kind], 2);
        let shape = FormulaShape::new(&[("F", 1), ("G", 2)], &["x", "y"], 3);
        let (a, b) = (shape.formula(&mut r), shape.formula(&mut r));
        let t = |f: &Formula| tau.apply(f, None).unwrap();
        prop_assert_eq!(t(&Formula::not(a.clone())), Formula::not(t(&a)));
        prop_assert_eq!(t(&Formula::and(a.clone(), b.clone())), Formula::and(t(&a), t(&b)));
        prop_assert_eq!(t(&Formula::or(a.clone(), b.clone())), Formula::or(t(&a), t(&b)));
        prop_assert_eq!(t(&Formula::implies(a.clone(), b.clone())), Formula::implies(t(&a), t(&b)));
    }

    #[test]
    fn composition_coherence(seed in any::<u64>()) {
        let mut r = rng(seed);
        let tau = random_translation(&mut r, TranslationKind::Plain, 1);
        let nu = self_translation(&mut r);
        let both = compose(&tau, &nu).unwrap();
        let size = r.gen_range(1..=3);
        let m = random_model(&mut r, &target_sig(), size);
        for _ in 0..4 {
            let a = source_sentence(&mut r, 3);
            let stepwise = nu.apply(&tau.apply(&a, None).unwrap(), None).unwrap();
            let direct = both.apply(&a, None).unwrap();
            prop_assert_eq!(
                eval(&m, &stepwise, &Assignment::new()).unwrap(),
                eval(&m, &direct, &Assignment::new()).unwrap(),
                "{}", a
            );
        }
    }

    #[test]
    fn internal_models_compose(seed in any::<u64>()) {
        let mut r = rng(seed);
        let tau = random_translation(&mut r, TranslationKind::Plain, 1);
        let nu = self_translation(&mut r);
        let size = r.gen_range(1..=3);
        let m = random_model(&mut r, &target_sig(), size);
        let inner = internal_model(&m, &nu, None);
        prop_assume!(inner.is_ok());
        let stepwise = internal_model(&inner.unwrap().model, &tau, None);
        prop_assume!(stepwise.is_ok());
        let stepwise = stepwise.unwrap();
        let direct = internal_model(&m, &compose(&tau, &nu).unwrap(), None).unwrap();
        prop_assert!(find_isomorphism(&stepwise.model, &direct.model).is_some());
    }

    #[test]
    fn fundamental_lemma(seed in any::<u64>(), kind in 0..TranslationKind::ALL.len()) {
        let c = random_fundamental_case(&mut rng(seed), TranslationKind::ALL[kind], 3, 3);
        prop_assert!(check_fundamental(&c.model, &c.translation, &c.sentence, c.params.as_deref()).unwrap());
    }

    #[test]
    fn witness_dual_is_an_involution(seed in any::<u64>()) {
        let ctx = ArithContext::standard();
        let w = random_comparison(&mut rng(seed), &ctx);
        prop_assert_eq!(w.dual().dual(), w.clone());
        prop_assert_ne!(w.dual().strict, w.strict);
        prop_assert!(w.dual().formula(&ctx).is_ok());
    }

    #[test]
    fn threshold_is_monotone(a in 1u32..20, b in 1u32..20, s in 1u32..20, c in 1u32..20, bump in 0usize..4) {
        let mut raised = [a, b, s, c];
        raised[bump] += 1;
        let [a2, b2, s2, c2] = raised;
        prop_assert!(threshold_values(a2, b2, s2, c2) >= threshold_values(a, b, s, c));
    }

    #[test]
    fn proof_levels_are_monotone(seed in any::<u64>(), extra in 1u32..4) {
        let mut r = rng(seed);
        let mut p = random_proof(&mut r, 4);
        let stats = p.stats().unwrap();
        p.level = stats.max_rho0 + extra;
        prop_assert!(p.check().is_ok());
        p.level = stats.max_rho0 - 1;
        prop_assert!(p.check().is_err());
    }

    #[test]
    fn mutated_proofs_are_rejected(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = random_proof(&mut r, 4);
        if let Some(m) = mutate_proof(&mut r, &p) {
            prop_assert!(m.proof.check().is_err(), "{}", m.description);
        }
    }
}
