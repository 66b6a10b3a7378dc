use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{random_model, FormulaShape};
use crate::fol::{substitute_many, Formula, Signature, Term, Var};
use crate::models::{internal_model, param_tuples, FiniteModel};
use crate::translations::{compose, disjunctive, slot, slots, Translation, TranslationSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TranslationKind {
    /// One-dimensional, componentwise identity.
    Plain,
    MultiDim,
    /// Identity read as agreement on a formula, with images respecting it.
    Quotient,
    Parametric,
    Composed,
    Disjunctive,
}

impl TranslationKind {
    pub const ALL: [TranslationKind; 6] = [
        TranslationKind::Plain,
        TranslationKind::MultiDim,
        TranslationKind::Quotient,
        TranslationKind::Parametric,
        TranslationKind::Composed,
        TranslationKind::Disjunctive,
    ];
}

fn source_sig() -> Signature {
    Signature::with_preds("src", &[("F", 1), ("G", 2)]).expect("fixed signature")
}

fn target_sig() -> Signature {
    Signature::with_preds("tgt", &[("P", 1), ("R", 2)]).expect("fixed signature")
}

/// A formula over the target vocabulary whose free variables are among
/// `free`, with quantifiers over `w`.
fn body(rng: &mut impl Rng, free: &[Var], depth: u32) -> Formula {
    let shape = FormulaShape::new(&[("P", 1), ("R", 2)], &["w"], depth);
    let mut bound = free.to_vec();
    let d = rng.gen_range(0..=depth);
    shape.grow(rng, d, &mut bound, true)
}

fn images(rng: &mut impl Rng, spec: TranslationSpec, extra: &[Var], depth: u32) -> TranslationSpec {
    let m = spec.dim;
    let mut spec = spec;
    for (p, k) in source_sig().preds() {
        let mut free = slots(0..k * m);
        free.extend_from_slice(extra);
        spec.preds.insert(p.to_string(), body(rng, &free, depth));
    }
    spec
}

fn plain(rng: &mut impl Rng, name: &str, dim: usize) -> Translation {
    let delta = body(rng, &slots(0..dim), 1);
    let spec = images(rng, TranslationSpec::new(name, source_sig(), target_sig(), dim, delta), &[], 2);
    Translation::new(spec).expect("generated translation is well formed")
}

fn boolean_combination(rng: &mut impl Rng, atoms: &[Formula], depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return atoms.choose(rng).expect("non-empty").clone();
    }
    let a = boolean_combination(rng, atoms, depth - 1);
    match rng.gen_range(0..4) {
        0 => Formula::not(a),
        1 => Formula::and(a, boolean_combination(rng, atoms, depth - 1)),
        2 => Formula::or(a, boolean_combination(rng, atoms, depth - 1)),
        _ => Formula::implies(a, boolean_combination(rng, atoms, depth - 1)),
    }
}

/// Identity is agreement on `phi`; images are Boolean combinations of `phi`
/// on the argument blocks, so identity is a congruence.
fn quotient(rng: &mut impl Rng, name: &str, dim: usize) -> Translation {
    let phi = body(rng, &slots(0..dim), 1);
    let phi_at = |block: usize| {
        let map: BTreeMap<Var, Term> = (0..dim).map(|c| (slot(c), Term::Var(slot(block * dim + c)))).collect();
        substitute_many(&phi, &map)
    };
    let delta = body(rng, &slots(0..dim), 1);
    let mut spec = TranslationSpec::new(name, source_sig(), target_sig(), dim, delta)
        .identity(Formula::iff(phi_at(0), phi_at(1)));
    for (p, k) in source_sig().preds() {
        let mut atoms: Vec<Formula> = (0..k).map(phi_at).collect();
        atoms.push(Formula::Top);
        spec.preds.insert(p.to_string(), boolean_combination(rng, &atoms, 2));
    }
    Translation::new(spec).expect("generated translation is well formed")
}

fn parametric(rng: &mut impl Rng, name: &str, dim: usize) -> Translation {
    let p = Var::new(&format!("{name}p"), 0);
    let mut free = slots(0..dim);
    free.push(p.clone());
    let delta = body(rng, &free, 1);
    let domain = body(rng, std::slice::from_ref(&p), 1);
    let spec = TranslationSpec::new(name, source_sig(), target_sig(), dim, delta).params(vec![p.clone()], Some(domain));
    Translation::new(images(rng, spec, &[p], 2)).expect("generated translation is well formed")
}

fn self_map(rng: &mut impl Rng, name: &str) -> Translation {
    let delta = body(rng, &slots(0..1), 1);
    let mut spec = TranslationSpec::new(name, target_sig(), target_sig(), 1, delta);
    for (p, k) in target_sig().preds() {
        spec.preds.insert(p.to_string(), body(rng, &slots(0..k), 2));
    }
    Translation::new(spec).expect("generated translation is well formed")
}

/// A random translation of the given kind from `{F/1, G/2}` into
/// `{P/1, R/2}`, of dimension at most `max_dim`.
pub fn random_translation(rng: &mut impl Rng, kind: TranslationKind, max_dim: usize) -> Translation {
    let max_dim = max_dim.max(1);
    let dim = rng.gen_range(1..=max_dim);
    match kind {
        TranslationKind::Plain => plain(rng, "t", 1),
        TranslationKind::MultiDim => plain(rng, "t", dim.max(2)),
        TranslationKind::Quotient => quotient(rng, "t", dim),
        TranslationKind::Parametric => parametric(rng, "t", dim),
        TranslationKind::Composed => {
            let inner = plain(rng, "t", dim);
            compose(&inner, &self_map(rng, "s")).expect("signatures line up")
        }
        TranslationKind::Disjunctive => {
            let left = plain(rng, "t", dim);
            let other = rng.gen_range(1..=max_dim);
            let right = if rng.gen_bool(0.5) {
                quotient(rng, "q", other)
            } else {
                parametric(rng, "r", other)
            };
            let case = FormulaShape::new(&[("P", 1), ("R", 2)], &["c"], 2).sentence(rng);
            disjunctive(&left, &case, &right).expect("signatures line up")
        }
    }
}

/// A target model, a translation that defines an internal model in it,
/// parameter values, and a source sentence.
#[derive(Clone, Debug)]
pub struct FundamentalCase {
    pub kind: TranslationKind,
    pub model: FiniteModel,
    pub translation: Translation,
    pub params: Option<Vec<usize>>,
    pub sentence: Formula,
}

/// Retries until the translation yields an internal model of `model`
/// (non-empty domain, identity a congruence) for some parameter values.
pub fn random_fundamental_case(rng: &mut impl Rng, kind: TranslationKind, max_size: usize, depth: u32) -> FundamentalCase {
    let sentences = FormulaShape::new(&[("F", 1), ("G", 2)], &["x", "y", "z"], depth);
    loop {
        let size = rng.gen_range(1..=max_size);
        let model = random_model(rng, &target_sig(), size);
        let max_dim = if size == 1 { 3 } else { 2 };
        let translation = random_translation(rng, kind, max_dim);
        let params = if translation.params().is_empty() {
            None
        } else {
            let Ok(tuples) = param_tuples(&model, &translation) else { continue };
            match tuples.choose(rng) {
                Some(t) => Some(t.clone()),
                None => continue,
            }
        };
        if internal_model(&model, &translation, params.as_deref()).is_err() {
            continue;
        }
        let sentence = sentences.sentence(rng);
        return FundamentalCase { kind, model, translation, params, sentence };
    }
}
