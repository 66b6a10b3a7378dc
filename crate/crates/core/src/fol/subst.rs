use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use super::shared::{is_shared, node_free_vars, FreeMemo, SharedMemo};
use super::{Formula, Term, Var};

pub(super) fn collect_free(f: &Formula, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>, memo: &mut FreeMemo) {
    let add_term = |t: &Term, bound: &Vec<Var>, out: &mut BTreeSet<Var>| {
        let mut vs = BTreeSet::new();
        t.vars(&mut vs);
        out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
    };
    let mut child = |a: &Arc<Formula>, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>| {
        if is_shared(a) {
            let set = node_free_vars(a, memo);
            out.extend(set.iter().filter(|v| !bound.contains(v)).cloned());
        } else {
            collect_free(a, bound, out, memo);
        }
    };
    match f {
        Formula::Atom(_, args) => args.iter().for_each(|t| add_term(t, bound, out)),
        Formula::Equals(a, b) => {
            add_term(a, bound, out);
            add_term(b, bound, out);
        }
        Formula::Top | Formula::Bot => {}
        Formula::Not(a) => child(a, bound, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            child(a, bound, out);
            child(b, bound, out);
        }
        Formula::Forall(v, a) | Formula::Exists(v, a) => {
            bound.push(v.clone());
            child(a, bound, out);
            bound.pop();
        }
    }
}

/// The least-index variant of `base` not in `avoid`.
pub fn fresh_var(base: &Var, avoid: &BTreeSet<Var>) -> Var {
    (0..).map(|i| base.with_index(i)).find(|v| !avoid.contains(v)).expect("indices exhausted")
}

fn subst_term(t: &Term, map: &BTreeMap<Var, Term>) -> Term {
    match t {
        Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| subst_term(a, map)).collect()),
    }
}

/// `f[v := t]` with capture avoidance.
pub fn substitute(f: &Formula, v: &Var, t: &Term) -> Formula {
    let mut map = BTreeMap::new();
    map.insert(v.clone(), t.clone());
    substitute_many(f, &map)
}

/// Simultaneous capture-avoiding substitution. A binder that would capture a
/// variable of an inserted term is renamed to its least fresh indexed variant.
pub fn substitute_many(f: &Formula, map: &BTreeMap<Var, Term>) -> Formula {
    let map: BTreeMap<Var, Term> = map.iter().filter(|(v, t)| t.as_var() != Some(*v)).map(|(v, t)| (v.clone(), t.clone())).collect();
    if map.is_empty() {
        return f.clone();
    }
    let mut range_vars = BTreeSet::new();
    map.values().for_each(|t| t.vars(&mut range_vars));
    Subst::default().go(f, &map, &range_vars)
}

type Results = Vec<(BTreeMap<Var, Term>, Arc<Formula>)>;

#[derive(Default)]
struct Subst {
    free: FreeMemo,
    done: HashMap<*const Formula, Results>,
}

impl Subst {
    fn child(&mut self, a: &Arc<Formula>, map: &BTreeMap<Var, Term>, range_vars: &BTreeSet<Var>) -> Arc<Formula> {
        if !is_shared(a) {
            return Arc::new(self.go(a, map, range_vars));
        }
        let free = node_free_vars(a, &mut self.free);
        if !map.keys().any(|k| free.contains(k)) {
            return a.clone();
        }
        let key = Arc::as_ptr(a);
        if let Some((_, hit)) = self.done.get(&key).and_then(|rs| rs.iter().find(|(m, _)| m == map)) {
            return hit.clone();
        }
        let out = Arc::new(self.go(a, map, range_vars));
        self.done.entry(key).or_default().push((map.clone(), out.clone()));
        out
    }

    fn go(&mut self, f: &Formula, map: &BTreeMap<Var, Term>, range_vars: &BTreeSet<Var>) -> Formula {
        match f {
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|t| subst_term(t, map)).collect()),
            Formula::Equals(a, b) => Formula::Equals(subst_term(a, map), subst_term(b, map)),
            Formula::Top | Formula::Bot => f.clone(),
            Formula::Not(a) => Formula::Not(self.child(a, map, range_vars)),
            Formula::And(a, b) => Formula::And(self.child(a, map, range_vars), self.child(b, map, range_vars)),
            Formula::Or(a, b) => Formula::Or(self.child(a, map, range_vars), self.child(b, map, range_vars)),
            Formula::Implies(a, b) => {
                Formula::Implies(self.child(a, map, range_vars), self.child(b, map, range_vars))
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let universal = matches!(f, Formula::Forall(..));
                let rebuild = |v: Var, b: Arc<Formula>| {
                    if universal {
                        Formula::Forall(v, b)
                    } else {
                        Formula::Exists(v, b)
                    }
                };
                let mut inner: BTreeMap<Var, Term> = map.clone();
                inner.remove(v);
                if inner.is_empty() {
                    return f.clone();
                }
                let free = node_free_vars(body, &mut self.free);
                inner.retain(|k, _| free.contains(k));
                if inner.is_empty() {
                    return f.clone();
                }
                let captures = range_vars.contains(v) && inner.values().any(|t| t.contains_var(v));
                if !captures {
                    let mut rv = BTreeSet::new();
                    inner.values().for_each(|t| t.vars(&mut rv));
                    return rebuild(v.clone(), self.child(body, &inner, &rv));
                }
                let mut avoid = body.all_vars();
                inner.values().for_each(|t| t.vars(&mut avoid));
                avoid.extend(inner.keys().cloned());
                let renamed = fresh_var(v, &avoid);
                inner.insert(v.clone(), Term::Var(renamed.clone()));
                let mut rv = BTreeSet::new();
                inner.values().for_each(|t| t.vars(&mut rv));
                rebuild(renamed, self.child(body, &inner, &rv))
            }
        }
    }
}

/// Equality up to the names of bound variables.
pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    alpha(a, b, &mut Vec::new(), &mut Vec::new())
}

fn lookup(env: &[Var], v: &Var) -> Option<usize> {
    env.iter().rposition(|w| w == v)
}

fn alpha_term(s: &Term, t: &Term, ea: &[Var], eb: &[Var]) -> bool {
    match (s, t) {
        (Term::Var(x), Term::Var(y)) => match (lookup(ea, x), lookup(eb, y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_term(x, y, ea, eb))
        }
        _ => false,
    }
}

fn alpha(a: &Formula, b: &Formula, ea: &mut Vec<Var>, eb: &mut Vec<Var>) -> bool {
    match (a, b) {
        (Formula::Top, Formula::Top) | (Formula::Bot, Formula::Bot) => true,
        (Formula::Atom(p, xs), Formula::Atom(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_term(x, y, ea, eb))
        }
        (Formula::Equals(x1, x2), Formula::Equals(y1, y2)) => {
            alpha_term(x1, y1, ea, eb) && alpha_term(x2, y2, ea, eb)
        }
        (Formula::Not(x), Formula::Not(y)) => alpha(x, y, ea, eb),
        (Formula::And(x1, x2), Formula::And(y1, y2))
        | (Formula::Or(x1, x2), Formula::Or(y1, y2))
        | (Formula::Implies(x1, x2), Formula::Implies(y1, y2)) => alpha(x1, y1, ea, eb) && alpha(x2, y2, ea, eb),
        (Formula::Forall(v, x), Formula::Forall(w, y)) | (Formula::Exists(v, x), Formula::Exists(w, y)) => {
            ea.push(v.clone());
            eb.push(w.clone());
            let r = alpha(x, y, ea, eb);
            ea.pop();
            eb.pop();
            r
        }
        _ => false,
    }
}

/// A name-level renaming applied to every occurrence, bound or free. Used to
/// keep source variables apart from reserved parameter names.
pub struct Renaming {
    map: BTreeMap<Arc<str>, Arc<str>>,
}

impl Renaming {
    /// Chooses replacement names for `clashing` that avoid `taken`.
    pub fn new(clashing: &BTreeSet<Arc<str>>, taken: &BTreeSet<Arc<str>>) -> Renaming {
        let mut used: BTreeSet<Arc<str>> = taken.union(clashing).cloned().collect();
        let mut map = BTreeMap::new();
        for n in clashing {
            let mut cand = format!("{n}x");
            while used.contains(cand.as_str()) {
                cand.push('x');
            }
            let cand: Arc<str> = Arc::from(cand.as_str());
            used.insert(cand.clone());
            map.insert(n.clone(), cand);
        }
        Renaming { map }
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn var(&self, v: &Var) -> Var {
        match self.map.get(&v.name) {
            Some(n) => Var { name: n.clone(), index: v.index },
            None => v.clone(),
        }
    }

    /// Applies the renaming to every variable occurrence, bound or free.
    pub fn apply(&self, f: &Formula) -> Formula {
        if self.map.is_empty() {
            return f.clone();
        }
        self.apply_with(f, &mut SharedMemo::new())
    }

    fn apply_with(&self, f: &Formula, memo: &mut SharedMemo<Arc<Formula>>) -> Formula {
        let term = |t: &Term| self.term(t);
        let mut sub = |a: &Arc<Formula>| memo.get_or(a, |m| Arc::new(self.apply_with(a, m)));
        match f {
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(term).collect()),
            Formula::Equals(a, b) => Formula::Equals(term(a), term(b)),
            Formula::Top | Formula::Bot => f.clone(),
            Formula::Not(a) => Formula::Not(sub(a)),
            Formula::And(a, b) => Formula::And(sub(a), sub(b)),
            Formula::Or(a, b) => Formula::Or(sub(a), sub(b)),
            Formula::Implies(a, b) => Formula::Implies(sub(a), sub(b)),
            Formula::Forall(v, a) => Formula::Forall(self.var(v), sub(a)),
            Formula::Exists(v, a) => Formula::Exists(self.var(v), sub(a)),
        }
    }

    fn term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => Term::Var(self.var(v)),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.term(a)).collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_lenient;

    fn v(n: &str) -> Var {
        Var::from_ident(n)
    }

    #[test]
    fn substitution_examples() {
        let f = parse_lenient("forall y. P(x,y)").unwrap();
        assert_eq!(substitute(&f, &v("x"), &Term::var(&v("z"))).to_string(), "forall y. P(z,y)");
        assert_eq!(substitute(&f, &v("x"), &Term::var(&v("y"))).to_string(), "forall y_1. P(y,y_1)");
        let g = parse_lenient("P(x)").unwrap();
        assert_eq!(substitute(&g, &v("x"), &Term::var(&v("x"))), g);
    }

    #[test]
    fn bound_occurrences_untouched() {
        let f = parse_lenient("P(x) /\\ exists x. Q(x)").unwrap();
        assert_eq!(substitute(&f, &v("x"), &Term::var(&v("u"))).to_string(), "(P(u) /\\ exists x. Q(x))");
    }

    #[test]
    fn simultaneous_swap() {
        let f = parse_lenient("R(x,y)").unwrap();
        let mut m = BTreeMap::new();
        m.insert(v("x"), Term::var(&v("y")));
        m.insert(v("y"), Term::var(&v("x")));
        assert_eq!(substitute_many(&f, &m).to_string(), "R(y,x)");
    }

    #[test]
    fn alpha_equivalence() {
        let a = parse_lenient("forall x. P(x)").unwrap();
        let b = parse_lenient("forall y. P(y)").unwrap();
        let c = parse_lenient("forall x. Q(x)").unwrap();
        assert!(alpha_eq(&a, &b));
        assert!(!alpha_eq(&a, &c));
        let d = parse_lenient("forall x. R(x,y)").unwrap();
        let e = parse_lenient("forall y. R(y,y)").unwrap();
        assert!(!alpha_eq(&d, &e));
    }

    #[test]
    fn free_variables() {
        assert_eq!(parse_lenient("P(x,y)").unwrap().free_vars().len(), 2);
        let f = parse_lenient("forall x. P(x,y)").unwrap();
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec![v("y")]);
        let tree = parse_lenient("forall x. (forall y. exists z. P(x,y,z) -> exists u. exists v. Q(x,u,v))").unwrap();
        assert!(tree.free_vars().is_empty());
    }
}
