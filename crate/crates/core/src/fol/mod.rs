//! Relational first-order formulas with identity, `top` and `bot`.

mod elim;
mod parse;
mod print;
pub(crate) mod shared;
mod signature;
mod subst;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use shared::{Seen, SharedMemo};

pub use elim::{eliminate_terms, graph_name, TermElimination};
pub use parse::{parse, parse_lenient, ParseError};
pub use signature::{parse_signature, SigError, Signature, ARITHMETIC_SYMBOLS};
pub use subst::{alpha_eq, fresh_var, substitute, substitute_many, Renaming};

/// A variable is a name together with a numeric index; `x` is `x` with index 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: Arc<str>,
    pub index: u32,
}

impl Var {
    pub fn new(name: impl AsRef<str>, index: u32) -> Var {
        Var { name: Arc::from(name.as_ref()), index }
    }

    /// Reads an identifier as written in formula text: a trailing `_<digits>` is the index.
    pub fn from_ident(ident: &str) -> Var {
        if let Some(pos) = ident.rfind('_') {
            let (head, tail) = (&ident[..pos], &ident[pos + 1..]);
            if !head.is_empty() && !tail.is_empty() && tail.bytes().all(|b| b.is_ascii_digit()) {
                if let Ok(index) = tail.parse::<u32>() {
                    return Var::new(head, index);
                }
            }
        }
        Var::new(ident, 0)
    }

    pub fn with_index(&self, index: u32) -> Var {
        Var { name: self.name.clone(), index }
    }

    fn name_looks_indexed(&self) -> bool {
        Var::from_ident(&self.name).name != self.name
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index == 0 && !self.name_looks_indexed() {
            write!(f, "{}", self.name)
        } else {
            write!(f, "{}_{}", self.name, self.index)
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    App(Arc<str>, Vec<Term>),
}

impl Term {
    pub fn var(v: &Var) -> Term {
        Term::Var(v.clone())
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        Term::App(Arc::from(f), args)
    }

    pub fn vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.vars(out)),
        }
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Arc<str>, Vec<Term>),
    Equals(Term, Term),
    Top,
    Bot,
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
    Forall(Var, Arc<Formula>),
    Exists(Var, Arc<Formula>),
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Binary connectives, used where code treats the three uniformly.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BinOp {
    And,
    Or,
    Implies,
}

impl Formula {
    pub fn atom(p: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(Arc::from(p), args)
    }

    /// Atom whose arguments are all variables.
    pub fn atom_vars<'a>(p: &str, args: impl IntoIterator<Item = &'a Var>) -> Formula {
        Formula::atom(p, args.into_iter().map(Term::var).collect())
    }

    pub fn eq_vars(a: &Var, b: &Var) -> Formula {
        Formula::Equals(Term::var(a), Term::var(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Arc::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Arc::new(a), Arc::new(b))
    }

    /// `(a -> b) /\ (b -> a)`; the AST has no biconditional.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::implies(a.clone(), b.clone()), Formula::implies(b, a))
    }

    pub fn forall(v: Var, body: Formula) -> Formula {
        Formula::Forall(v, Arc::new(body))
    }

    pub fn exists(v: Var, body: Formula) -> Formula {
        Formula::Exists(v, Arc::new(body))
    }

    pub fn binary(op: BinOp, a: Formula, b: Formula) -> Formula {
        match op {
            BinOp::And => Formula::and(a, b),
            BinOp::Or => Formula::or(a, b),
            BinOp::Implies => Formula::implies(a, b),
        }
    }

    /// Right-nested conjunction; `top` for an empty list.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut parts: Vec<Formula> = parts.into_iter().collect();
        let Some(mut acc) = parts.pop() else { return Formula::Top };
        while let Some(p) = parts.pop() {
            acc = Formula::and(p, acc);
        }
        acc
    }

    /// Right-nested disjunction; `bot` for an empty list.
    pub fn disj(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut parts: Vec<Formula> = parts.into_iter().collect();
        let Some(mut acc) = parts.pop() else { return Formula::Bot };
        while let Some(p) = parts.pop() {
            acc = Formula::or(p, acc);
        }
        acc
    }

    pub fn forall_many(vars: &[Var], body: Formula) -> Formula {
        vars.iter().rev().fold(body, |acc, v| Formula::forall(v.clone(), acc))
    }

    pub fn exists_many(vars: &[Var], body: Formula) -> Formula {
        vars.iter().rev().fold(body, |acc, v| Formula::exists(v.clone(), acc))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom(..) | Formula::Equals(..) | Formula::Top | Formula::Bot)
    }

    pub fn is_quantifier(&self) -> bool {
        matches!(self, Formula::Forall(..) | Formula::Exists(..))
    }

    pub fn as_binary(&self) -> Option<(BinOp, &Arc<Formula>, &Arc<Formula>)> {
        match self {
            Formula::And(a, b) => Some((BinOp::And, a, b)),
            Formula::Or(a, b) => Some((BinOp::Or, a, b)),
            Formula::Implies(a, b) => Some((BinOp::Implies, a, b)),
            _ => None,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        subst::collect_free(self, &mut Vec::new(), &mut out, &mut SharedMemo::new());
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable occurring anywhere, free or bound.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_all_vars(&mut out);
        out
    }

    fn collect_all_vars(&self, out: &mut BTreeSet<Var>) {
        self.visit_unique(&mut |f| match f {
            Formula::Atom(_, args) => args.iter().for_each(|t| t.vars(out)),
            Formula::Equals(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Formula::Forall(v, _) | Formula::Exists(v, _) => {
                out.insert(v.clone());
            }
            _ => {}
        });
    }

    /// Predicate symbols with the arities they are used at.
    pub fn predicates(&self) -> std::collections::BTreeMap<String, usize> {
        let mut out = std::collections::BTreeMap::new();
        self.visit_unique(&mut |f| {
            if let Formula::Atom(p, args) = f {
                out.insert(p.to_string(), args.len());
            }
        });
        out
    }

    pub fn has_function_symbols(&self) -> bool {
        let mut found = false;
        self.visit_unique(&mut |f| match f {
            Formula::Atom(_, args) => found |= args.iter().any(|t| !t.is_var()),
            Formula::Equals(a, b) => found |= !a.is_var() || !b.is_var(),
            _ => {}
        });
        found
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// Pre-order traversal that enters each shared subformula once.
    pub fn visit_unique(&self, f: &mut impl FnMut(&Formula)) {
        self.visit_seen(f, &mut Seen::default());
    }

    fn visit_seen(&self, f: &mut impl FnMut(&Formula), seen: &mut Seen) {
        f(self);
        let sub = |a: &Arc<Formula>, f: &mut _, seen: &mut Seen| {
            if seen.first_visit(a) {
                a.visit_seen(f, seen);
            }
        };
        match self {
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => sub(a, f, seen),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                sub(a, f, seen);
                sub(b, f, seen);
            }
            _ => {}
        }
    }

    /// Number of AST nodes of the unfolded tree, counting terms; invariant
    /// under renaming.
    pub fn symbol_count(&self) -> usize {
        self.count_with(&mut SharedMemo::new())
    }

    fn count_with(&self, memo: &mut SharedMemo<usize>) -> usize {
        let mut sub = |a: &Arc<Formula>| memo.get_or(a, |m| a.count_with(m));
        match self {
            Formula::Atom(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Formula::Equals(a, b) => 1 + a.size() + b.size(),
            Formula::Top | Formula::Bot => 1,
            Formula::Not(a) => 1 + sub(a),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + sub(a) + sub(b),
            Formula::Forall(_, a) | Formula::Exists(_, a) => 2 + sub(a),
        }
    }

    /// Syntactic subformula test (exact equality, no renaming).
    pub fn contains_subformula(&self, needle: &Formula) -> bool {
        let mut found = false;
        self.visit_unique(&mut |f| found |= f == needle);
        found
    }

    /// Folds `top` and `bot` away where the connective allows it. Quantifiers
    /// over a constant body collapse, which is sound over nonempty domains.
    pub fn simplify_constants(&self) -> Formula {
        self.simplify_with(&mut SharedMemo::new())
    }

    fn simplify_with(&self, memo: &mut SharedMemo<Formula>) -> Formula {
        use Formula::{Bot, Top};
        let mut sub = |a: &Arc<Formula>| memo.get_or(a, |m| a.simplify_with(m));
        match self {
            Formula::Atom(..) | Formula::Equals(..) | Top | Bot => self.clone(),
            Formula::Not(a) => match sub(a) {
                Top => Bot,
                Bot => Top,
                b => Formula::not(b),
            },
            Formula::And(a, b) => match (sub(a), sub(b)) {
                (Bot, _) | (_, Bot) => Bot,
                (Top, x) | (x, Top) => x,
                (x, y) => Formula::and(x, y),
            },
            Formula::Or(a, b) => match (sub(a), sub(b)) {
                (Top, _) | (_, Top) => Top,
                (Bot, x) | (x, Bot) => x,
                (x, y) => Formula::or(x, y),
            },
            Formula::Implies(a, b) => match (sub(a), sub(b)) {
                (Bot, _) | (_, Top) => Top,
                (Top, x) => x,
                (x, Bot) => Formula::not(x),
                (x, y) => Formula::implies(x, y),
            },
            Formula::Forall(v, a) | Formula::Exists(v, a) => match sub(a) {
                Top => Top,
                Bot => Bot,
                b if matches!(self, Formula::Forall(..)) => Formula::forall(v.clone(), b),
                b => Formula::exists(v.clone(), b),
            },
        }
    }

    /// Maps every atom (including identities, `top`, `bot`) through `f`, keeping the rest.
    /// A shared subformula is mapped once.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Formula) -> Formula) -> Formula {
        self.map_atoms_with(f, &mut SharedMemo::new())
    }

    fn map_atoms_with(&self, f: &mut impl FnMut(&Formula) -> Formula, memo: &mut SharedMemo<Arc<Formula>>) -> Formula {
        let mut sub = |a: &Arc<Formula>, f: &mut _| memo.get_or(a, |m| Arc::new(a.map_atoms_with(f, m)));
        match self {
            Formula::Atom(..) | Formula::Equals(..) | Formula::Top | Formula::Bot => f(self),
            Formula::Not(a) => Formula::Not(sub(a, f)),
            Formula::And(a, b) => {
                let a = sub(a, f);
                Formula::And(a, sub(b, f))
            }
            Formula::Or(a, b) => {
                let a = sub(a, f);
                Formula::Or(a, sub(b, f))
            }
            Formula::Implies(a, b) => {
                let a = sub(a, f);
                Formula::Implies(a, sub(b, f))
            }
            Formula::Forall(v, a) => Formula::Forall(v.clone(), sub(a, f)),
            Formula::Exists(v, a) => Formula::Exists(v.clone(), sub(a, f)),
        }
    }
}
