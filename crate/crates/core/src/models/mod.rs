//! Finite structures and Tarskian evaluation.

mod file;
mod internal;
mod iso;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::fol::{Formula, Term, Var};
use crate::translations::TranslationError;

pub use file::parse_model;
pub use internal::{check_fundamental, internal_model, param_tuples, InternalModel};
pub use iso::find_isomorphism;

/// Largest table (universe size to the power of the arity) a model will store.
pub const MAX_TABLE: usize = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("free variable `{0}` has no value")]
    Unassigned(Var),
    #[error("predicate `{name}` with arity {arity} is not interpreted")]
    UnknownPredicate { name: String, arity: usize },
    #[error("function `{name}` with arity {arity} is not interpreted")]
    UnknownFunction { name: String, arity: usize },
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("table for `{0}` would be too large")]
    TooLarge(String),
    #[error("function `{0}` is not total")]
    PartialFunction(String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("the domain formula is satisfied by no tuple")]
    EmptyDomain,
    #[error("translated identity is not an equivalence relation ({0})")]
    NotEquivalence(String),
    #[error("translated identity is not a congruence for `{0}`")]
    NotCongruence(String),
    #[error("parameter values lie outside the parameter domain")]
    ParamOutsideDomain,
    #[error("expected {expected} parameter values, got {got}")]
    ParamCount { expected: usize, got: usize },
    #[error(transparent)]
    Translation(#[from] TranslationError),
}

/// Variable values by element index.
pub type Assignment = BTreeMap<Var, usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Relation {
    arity: usize,
    bits: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Function {
    arity: usize,
    table: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModel {
    universe: Vec<String>,
    preds: BTreeMap<String, Relation>,
    funs: BTreeMap<String, Function>,
}

fn table_len(size: usize, arity: usize, name: &str) -> Result<usize, ModelError> {
    let mut n: usize = 1;
    for _ in 0..arity {
        n = n.checked_mul(size).filter(|&n| n <= MAX_TABLE).ok_or_else(|| ModelError::TooLarge(name.to_string()))?;
    }
    Ok(n)
}

fn index_of(size: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &e| acc * size + e)
}

impl FiniteModel {
    pub fn new(universe: Vec<String>) -> FiniteModel {
        FiniteModel { universe, preds: BTreeMap::new(), funs: BTreeMap::new() }
    }

    /// A model over elements named `0, 1, ...`.
    pub fn with_size(n: usize) -> FiniteModel {
        FiniteModel::new((0..n).map(|i| i.to_string()).collect())
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.universe.iter().position(|e| e == name)
    }

    /// Declares `name` with an empty extension.
    pub fn add_pred(&mut self, name: &str, arity: usize) -> Result<(), ModelError> {
        let len = table_len(self.size(), arity, name)?;
        self.preds.insert(name.to_string(), Relation { arity, bits: vec![false; len] });
        Ok(())
    }

    /// Adds a tuple, declaring the predicate if needed.
    pub fn insert(&mut self, name: &str, tuple: &[usize]) -> Result<(), ModelError> {
        if !self.preds.contains_key(name) {
            self.add_pred(name, tuple.len())?;
        }
        let size = self.size();
        let rel = self.preds.get_mut(name).expect("declared");
        if rel.arity != tuple.len() {
            return Err(ModelError::UnknownPredicate { name: name.to_string(), arity: tuple.len() });
        }
        if let Some(&e) = tuple.iter().find(|&&e| e >= size) {
            return Err(ModelError::UnknownElement(e.to_string()));
        }
        rel.bits[index_of(size, tuple)] = true;
        Ok(())
    }

    pub fn set_fun(&mut self, name: &str, arity: usize, table: Vec<usize>) -> Result<(), ModelError> {
        let len = table_len(self.size(), arity, name)?;
        if table.len() != len || table.iter().any(|&e| e >= self.size()) {
            return Err(ModelError::PartialFunction(name.to_string()));
        }
        self.funs.insert(name.to_string(), Function { arity, table });
        Ok(())
    }

    pub fn pred_arity(&self, name: &str) -> Option<usize> {
        self.preds.get(name).map(|r| r.arity)
    }

    pub fn preds(&self) -> impl Iterator<Item = (&str, usize)> {
        self.preds.iter().map(|(n, r)| (n.as_str(), r.arity))
    }

    pub fn funs(&self) -> impl Iterator<Item = (&str, usize)> {
        self.funs.iter().map(|(n, f)| (n.as_str(), f.arity))
    }

    pub fn holds(&self, name: &str, tuple: &[usize]) -> Result<bool, ModelError> {
        match self.preds.get(name) {
            Some(r) if r.arity == tuple.len() => Ok(r.bits[index_of(self.size(), tuple)]),
            _ => Err(ModelError::UnknownPredicate { name: name.to_string(), arity: tuple.len() }),
        }
    }

    pub fn apply_fun(&self, name: &str, args: &[usize]) -> Result<usize, ModelError> {
        match self.funs.get(name) {
            Some(f) if f.arity == args.len() => Ok(f.table[index_of(self.size(), args)]),
            _ => Err(ModelError::UnknownFunction { name: name.to_string(), arity: args.len() }),
        }
    }

    /// The extension of `name` in lexicographic order.
    pub fn extension(&self, name: &str) -> Vec<Vec<usize>> {
        let Some(r) = self.preds.get(name) else { return Vec::new() };
        all_tuples(self.size(), r.arity).filter(|t| r.bits[index_of(self.size(), t)]).collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("universe {}\n", self.universe.join(" "));
        let show = |t: &[usize]| -> String {
            let names: Vec<&str> = t.iter().map(|&e| self.universe[e].as_str()).collect();
            if t.len() == 1 {
                names[0].to_string()
            } else {
                format!("({})", names.join(","))
            }
        };
        for (name, r) in &self.preds {
            let tuples: Vec<String> = self.extension(name).iter().map(|t| show(t)).collect();
            s.push_str(&format!("pred {name}/{}: {}\n", r.arity, tuples.join(" ")).replace(": \n", ":\n"));
        }
        for (name, f) in &self.funs {
            let entries: Vec<String> = all_tuples(self.size(), f.arity)
                .map(|t| {
                    let out = &self.universe[f.table[index_of(self.size(), &t)]];
                    let arg = if f.arity == 0 { "()".to_string() } else { show(&t) };
                    format!("{arg}->{out}")
                })
                .collect();
            s.push_str(&format!("fun {name}: {}\n", entries.join(" ")));
        }
        s
    }
}

/// All tuples of the given length over `0..size`, lexicographically.
pub fn all_tuples(size: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if size == 0 && len > 0 { 0 } else { size.pow(len as u32) };
    (0..total).map(move |mut code| {
        let mut t = vec![0; len];
        for slot in t.iter_mut().rev() {
            *slot = code % size;
            code /= size;
        }
        t
    })
}

struct Evaluator<'a> {
    model: &'a FiniteModel,
    env: Vec<(Var, usize)>,
}

impl Evaluator<'_> {
    fn lookup(&self, v: &Var) -> Result<usize, ModelError> {
        self.env.iter().rev().find(|(w, _)| w == v).map(|(_, e)| *e).ok_or_else(|| ModelError::Unassigned(v.clone()))
    }

    fn term(&self, t: &Term) -> Result<usize, ModelError> {
        match t {
            Term::Var(v) => self.lookup(v),
            Term::App(f, args) => {
                let vals = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                self.model.apply_fun(f, &vals)
            }
        }
    }

    fn eval(&mut self, f: &Formula) -> Result<bool, ModelError> {
        Ok(match f {
            Formula::Top => true,
            Formula::Bot => false,
            Formula::Atom(p, args) => {
                let vals = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                self.model.holds(p, &vals)?
            }
            Formula::Equals(a, b) => self.term(a)? == self.term(b)?,
            Formula::Not(a) => !self.eval(a)?,
            Formula::And(a, b) => self.eval(a)? && self.eval(b)?,
            Formula::Or(a, b) => self.eval(a)? || self.eval(b)?,
            Formula::Implies(a, b) => !self.eval(a)? || self.eval(b)?,
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let universal = matches!(f, Formula::Forall(..));
                let mut result = universal;
                for e in 0..self.model.size() {
                    self.env.push((v.clone(), e));
                    let r = self.eval(body);
                    self.env.pop();
                    if r? != universal {
                        result = !universal;
                        break;
                    }
                }
                result
            }
        })
    }
}

/// Tarskian truth of `f` in `model` under `assignment`.
pub fn eval(model: &FiniteModel, f: &Formula, assignment: &Assignment) -> Result<bool, ModelError> {
    let env = assignment.iter().map(|(v, e)| (v.clone(), *e)).collect();
    Evaluator { model, env }.eval(f)
}

/// Evaluation with variables bound positionally.
pub fn eval_with(model: &FiniteModel, f: &Formula, binding: &[(Var, usize)]) -> Result<bool, ModelError> {
    Evaluator { model, env: binding.to_vec() }.eval(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_lenient;

    fn model() -> FiniteModel {
        let mut m = FiniteModel::new(vec!["a".into(), "b".into(), "c".into()]);
        m.insert("P", &[0]).unwrap();
        m.insert("R", &[0, 1]).unwrap();
        m.insert("R", &[1, 2]).unwrap();
        m
    }

    fn truth(text: &str) -> bool {
        eval(&model(), &parse_lenient(text).unwrap(), &Assignment::new()).unwrap()
    }

    #[test]
    fn basic_truths() {
        assert!(truth("exists x. P(x)"));
        assert!(!truth("bot"));
        assert!(!truth("forall x. P(x)"));
        assert!(truth("forall x. exists y. (R(x,y) \\/ R(y,x) \\/ x = y)"));
        assert!(!truth("exists x. exists y. exists z. (R(x,y) /\\ R(y,z) /\\ R(z,x))"));
    }

    #[test]
    fn unassigned_variable_is_an_error() {
        let f = parse_lenient("P(x)").unwrap();
        assert_eq!(eval(&model(), &f, &Assignment::new()), Err(ModelError::Unassigned(Var::new("x", 0))));
        let mut a = Assignment::new();
        a.insert(Var::new("x", 0), 0);
        assert_eq!(eval(&model(), &f, &a), Ok(true));
    }

    #[test]
    fn shadowing_uses_innermost_binder() {
        assert!(truth("exists x. (P(x) /\\ exists x. R(x,x) -> top)"));
        assert!(truth("forall x. exists x. P(x)"));
    }

    #[test]
    fn functions_evaluate() {
        let mut m = model();
        m.set_fun("f", 1, vec![1, 2, 0]).unwrap();
        let g = crate::fol::parse("forall x. ~f(x) = x", &{
            let mut s = crate::fol::Signature::with_preds("s", &[("P", 1), ("R", 2)]).unwrap();
            s.add_fun("f", 1).unwrap();
            s
        })
        .unwrap();
        assert!(eval(&m, &g, &Assignment::new()).unwrap());
        assert!(m.set_fun("g", 1, vec![0, 5, 1]).is_err());
    }

    #[test]
    fn tuples_enumerate_in_order() {
        let ts: Vec<Vec<usize>> = all_tuples(2, 2).collect();
        assert_eq!(ts, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(all_tuples(3, 0).count(), 1);
    }
}
