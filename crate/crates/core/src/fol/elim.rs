use std::collections::{BTreeMap, BTreeSet};

use super::{fresh_var, Formula, Signature, Term, Var};

/// Result of replacing function symbols by their graph predicates.
#[derive(Clone, Debug)]
pub struct TermElimination {
    pub formula: Formula,
    /// Graph predicates introduced, with arity `k + 1` for a `k`-ary function.
    pub graph_preds: BTreeMap<String, usize>,
    /// Bound on the rise of `rho0`: each atom becomes `exists y. (G(..,y) /\ ..)`.
    pub rho0_overhead: u32,
}

/// Name of the graph predicate standing for function symbol `f`.
pub fn graph_name(f: &str) -> String {
    format!("G{f}")
}

struct Eliminator {
    avoid: BTreeSet<Var>,
    base: Var,
    graphs: BTreeMap<String, usize>,
}

impl Eliminator {
    fn fresh(&mut self) -> Var {
        let v = fresh_var(&self.base, &self.avoid);
        self.avoid.insert(v.clone());
        v
    }

    /// Flattens `t` innermost-first, recording one graph step per application.
    fn flatten(&mut self, t: &Term, steps: &mut Vec<(String, Vec<Var>, Var)>) -> Var {
        match t {
            Term::Var(v) => v.clone(),
            Term::App(f, args) => {
                let inputs: Vec<Var> = args.iter().map(|a| self.flatten(a, steps)).collect();
                let out = self.fresh();
                self.graphs.insert(graph_name(f), args.len() + 1);
                steps.push((graph_name(f), inputs, out.clone()));
                out
            }
        }
    }

    fn atom(&mut self, f: &Formula) -> Formula {
        let mut steps = Vec::new();
        let body = match f {
            Formula::Atom(p, args) => {
                let vs: Vec<Var> = args.iter().map(|t| self.flatten(t, &mut steps)).collect();
                Formula::atom_vars(p, &vs)
            }
            Formula::Equals(a, b) => {
                let x = self.flatten(a, &mut steps);
                let y = self.flatten(b, &mut steps);
                Formula::eq_vars(&x, &y)
            }
            _ => return f.clone(),
        };
        steps.into_iter().rev().fold(body, |acc, (g, mut inputs, out)| {
            inputs.push(out.clone());
            Formula::exists(out, Formula::and(Formula::atom_vars(&g, &inputs), acc))
        })
    }
}

/// Replaces each `k`-ary function symbol by a `k+1`-ary graph predicate,
/// unfolding innermost subterms first into existential witnesses.
pub fn eliminate_terms(f: &Formula, sig: &Signature) -> TermElimination {
    let mut el = Eliminator { avoid: f.all_vars(), base: Var::new("y", 0), graphs: BTreeMap::new() };
    for (g, k) in sig.funs() {
        el.graphs.insert(graph_name(g), k + 1);
    }
    let formula = f.map_atoms(&mut |a| el.atom(a));
    TermElimination { formula, graph_preds: el.graphs, rho0_overhead: 1 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::{parse, parse_lenient};

    fn sig() -> Signature {
        let mut s = Signature::with_preds("t", &[("R", 1), ("T", 2)]).unwrap();
        s.add_fun("f", 1).unwrap();
        s.add_fun("g", 2).unwrap();
        s.add_fun("c", 0).unwrap();
        s
    }

    #[test]
    fn single_application() {
        let s = sig();
        let e = eliminate_terms(&parse("R(f(x))", &s).unwrap(), &s);
        assert_eq!(e.formula.to_string(), "exists y. (Gf(x,y) /\\ R(y))");
        assert_eq!(e.graph_preds.get("Gf"), Some(&2));
    }

    #[test]
    fn innermost_first() {
        let s = sig();
        let e = eliminate_terms(&parse("T(g(f(x),c), y)", &s).unwrap(), &s);
        assert_eq!(
            e.formula.to_string(),
            "exists y_1. (Gf(x,y_1) /\\ exists y_2. (Gc(y_2) /\\ exists y_3. (Gg(y_1,y_2,y_3) /\\ T(y_3,y))))"
        );
    }

    #[test]
    fn term_free_fixpoint() {
        let f = parse_lenient("forall x. R(x)").unwrap();
        assert_eq!(eliminate_terms(&f, &sig()).formula, f);
    }
}
