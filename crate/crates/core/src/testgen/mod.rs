//! Seeded generators for random formulas, models, translations, proofs and
//! comparison pairs. Everything draws from a `ChaCha8Rng`, so a seed fixes
//! the output on every platform.

mod proofs;
mod translations;

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arith::{ArithContext, WitnessComparison};
use crate::fol::{Formula, Signature, Var};
use crate::models::{all_tuples, eval, Assignment, FiniteModel};
use crate::proof::Sequent;

pub use proofs::{mutate_proof, random_proof, Mutation};
pub use translations::{random_fundamental_case, random_translation, FundamentalCase, TranslationKind};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The vocabulary and size limits of generated formulas.
#[derive(Clone, Debug)]
pub struct FormulaShape {
    pub preds: Vec<(String, usize)>,
    pub vars: Vec<Var>,
    /// Bound on the nesting of connectives and quantifiers.
    pub max_depth: u32,
    pub equality: bool,
}

impl FormulaShape {
    pub fn new(preds: &[(&str, usize)], vars: &[&str], max_depth: u32) -> FormulaShape {
        FormulaShape {
            preds: preds.iter().map(|&(p, k)| (p.to_string(), k)).collect(),
            vars: vars.iter().map(|v| Var::new(v, 0)).collect(),
            max_depth,
            equality: true,
        }
    }

    pub fn from_signature(sig: &Signature, vars: &[&str], max_depth: u32) -> FormulaShape {
        let preds: Vec<(&str, usize)> = sig.preds().collect();
        FormulaShape::new(&preds, vars, max_depth)
    }

    /// Up to four predicates of arity 1 to 3, as used by the measure corpus.
    pub fn relational(max_depth: u32) -> FormulaShape {
        FormulaShape::new(&[("P", 1), ("Q", 2), ("R", 2), ("T", 3)], &["x", "y", "z", "w"], max_depth)
    }

    pub fn signature(&self) -> Signature {
        let preds: Vec<(&str, usize)> = self.preds.iter().map(|(p, k)| (p.as_str(), *k)).collect();
        Signature::with_preds("gen", &preds).expect("generated names are distinct identifiers")
    }

    fn atom(&self, rng: &mut impl Rng, pool: &[Var]) -> Formula {
        if pool.is_empty() {
            return if rng.gen_bool(0.5) { Formula::Top } else { Formula::Bot };
        }
        let pick = |rng: &mut _| pool.choose(rng).expect("non-empty").clone();
        let roll = rng.gen_range(0..10);
        if self.equality && roll == 0 {
            let (a, b) = (pick(rng), pick(rng));
            return Formula::eq_vars(&a, &b);
        }
        if roll == 1 || self.preds.is_empty() {
            return if rng.gen_bool(0.5) { Formula::Top } else { Formula::Bot };
        }
        let (p, k) = self.preds.choose(rng).expect("non-empty");
        let args: Vec<Var> = (0..*k).map(|_| pick(rng)).collect();
        Formula::atom_vars(p, &args)
    }

    /// `closed` restricts atom arguments to bound variables.
    fn grow(&self, rng: &mut impl Rng, depth: u32, bound: &mut Vec<Var>, closed: bool) -> Formula {
        let must_bind = closed && bound.is_empty() && depth > 0;
        if depth == 0 || (!must_bind && rng.gen_bool(0.2)) {
            let pool = if closed { bound.clone() } else { self.vars.clone() };
            return self.atom(rng, &pool);
        }
        let roll = if must_bind { rng.gen_range(4..6) } else { rng.gen_range(0..6) };
        match roll {
            0 => Formula::not(self.grow(rng, depth - 1, bound, closed)),
            1..=3 => {
                let a = self.grow(rng, depth - 1, bound, closed);
                let b = self.grow(rng, depth - 1, bound, closed);
                match roll {
                    1 => Formula::and(a, b),
                    2 => Formula::or(a, b),
                    _ => Formula::implies(a, b),
                }
            }
            _ => {
                let v = self.vars.choose(rng).expect("at least one variable").clone();
                bound.push(v.clone());
                let body = self.grow(rng, depth - 1, bound, closed);
                bound.pop();
                if roll == 4 {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                }
            }
        }
    }

    pub fn formula(&self, rng: &mut impl Rng) -> Formula {
        let depth = rng.gen_range(0..=self.max_depth);
        self.grow(rng, depth, &mut Vec::new(), false)
    }

    pub fn sentence(&self, rng: &mut impl Rng) -> Formula {
        let depth = rng.gen_range(0..=self.max_depth);
        self.grow(rng, depth, &mut Vec::new(), true)
    }

    /// A formula whose only free variable is `free`, which does occur.
    pub fn formula_in(&self, rng: &mut impl Rng, free: &Var) -> Formula {
        let depth = rng.gen_range(0..=self.max_depth);
        let mut bound = vec![free.clone()];
        let f = self.grow(rng, depth, &mut bound, true);
        if f.free_vars().contains(free) {
            f
        } else {
            let (p, _) = self.preds.iter().find(|(_, k)| *k == 1).expect("a unary predicate");
            Formula::and(Formula::atom_vars(p, [free]), f)
        }
    }
}

pub fn random_model(rng: &mut impl Rng, sig: &Signature, size: usize) -> FiniteModel {
    let mut m = FiniteModel::with_size(size);
    for (p, k) in sig.preds() {
        m.add_pred(p, k).expect("fresh predicate");
        for t in all_tuples(size, k) {
            if rng.gen_bool(0.5) {
                m.insert(p, &t).expect("tuple in range");
            }
        }
    }
    m
}

/// Largest number of table entries [`all_models`] will enumerate over.
pub const MAX_MODEL_BITS: usize = 20;

/// Every model of the given size over the predicates, or `None` when the
/// tables hold more than [`MAX_MODEL_BITS`] entries.
pub fn all_models(preds: &[(String, usize)], size: usize) -> Option<impl Iterator<Item = FiniteModel> + '_> {
    let cells: Vec<(&str, Vec<usize>)> =
        preds.iter().flat_map(|(p, k)| all_tuples(size, *k).map(move |t| (p.as_str(), t))).collect();
    if cells.len() > MAX_MODEL_BITS {
        return None;
    }
    Some((0u64..1 << cells.len()).map(move |mask| {
        let mut m = FiniteModel::with_size(size);
        for (p, k) in preds {
            m.add_pred(p, *k).expect("fresh predicate");
        }
        for (bit, (p, t)) in cells.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                m.insert(p, t).expect("tuple in range");
            }
        }
        m
    }))
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("models of size {size} have more than {MAX_MODEL_BITS} table entries")]
pub struct SearchTooLarge {
    pub size: usize,
}

/// A model of size at most `max_size` and an assignment making every
/// assumption true and the conclusion false, found by exhaustive search.
/// Fails up front when the largest size cannot be enumerated.
pub fn countermodel(seq: &Sequent, max_size: usize) -> Result<Option<(FiniteModel, Assignment)>, SearchTooLarge> {
    let mut preds = BTreeMap::new();
    let mut free = std::collections::BTreeSet::new();
    for f in seq.assumptions.iter().chain([&seq.formula]) {
        preds.extend(f.predicates());
        free.extend(f.free_vars());
    }
    let preds: Vec<(String, usize)> = preds.into_iter().collect();
    let free: Vec<Var> = free.into_iter().collect();
    let cells: usize = preds.iter().map(|(_, k)| max_size.pow(*k as u32)).sum();
    if cells > MAX_MODEL_BITS {
        return Err(SearchTooLarge { size: max_size });
    }
    for size in 1..=max_size {
        let models = all_models(&preds, size).ok_or(SearchTooLarge { size })?;
        for m in models {
            for values in all_tuples(size, free.len()) {
                let a: Assignment = free.iter().cloned().zip(values).collect();
                let holds = |f: &Formula| eval(&m, f, &a).expect("every symbol is interpreted");
                if seq.assumptions.iter().all(holds) && !holds(&seq.formula) {
                    return Ok(Some((m, a)));
                }
            }
        }
    }
    Ok(None)
}

/// `exists x. (N(x) /\ A0(x))` over the number translation's domain, with a
/// body in the number language plus `P`/`Q`.
pub fn random_relativized(rng: &mut impl Rng, var: &str, ctx: &ArithContext, depth: u32) -> Formula {
    let shape = FormulaShape::new(&[("P", 1), ("Q", 2), ("Lt", 2), ("S", 2)], &["u", "w"], depth);
    let x = Var::new(var, 0);
    let body = shape.formula_in(rng, &x);
    Formula::exists(x.clone(), Formula::and(ctx.numbers.delta_on(&[x]), body))
}

pub fn random_comparison(rng: &mut impl Rng, ctx: &ArithContext) -> WitnessComparison {
    let left = random_relativized(rng, "x", ctx, 2);
    let right = random_relativized(rng, "y", ctx, 2);
    WitnessComparison { left, right, strict: rng.gen_bool(0.5) }
}

/// Theory sentence, free-block formula and stipulated `rho0` of the
/// substitution and provability predicates for the Rosser construction.
#[derive(Clone, Debug)]
pub struct RosserInput {
    pub axioms: Formula,
    pub target: Formula,
    pub sub_rho0: u32,
    pub prov_rho0: u32,
}

pub fn random_rosser_input(rng: &mut impl Rng) -> RosserInput {
    let theory = FormulaShape::new(&[("E", 2), ("A", 3), ("N", 1)], &["a", "b"], 4);
    let target = FormulaShape::new(&[("P", 1), ("Q", 2), ("Lt", 2)], &["u", "w"], 3);
    RosserInput {
        axioms: theory.sentence(rng),
        target: target.formula_in(rng, &Var::new("u", 0)),
        sub_rho0: rng.gen_range(1..=6),
        prov_rho0: rng.gen_range(1..=6),
    }
}
