use std::collections::{BTreeMap, BTreeSet};

use malachite_base::num::logic::traits::{BitAccess, SignificantBits};
use malachite_nz::natural::Natural;

use super::ArithContext;
use crate::fol::{substitute_many, Formula, Term, Var};
use crate::translations::block;

/// A numeral formula and its free variable block.
#[derive(Clone, Debug)]
pub struct Numeral {
    pub formula: Formula,
    pub block: Vec<Var>,
}

fn unary(k: u32, out: &Var, base: &str) -> Formula {
    if k == 0 {
        return Formula::atom_vars("Z", [out]);
    }
    let cs: Vec<Var> = (0..k).map(|i| Var::new(base, 3 + i)).collect();
    let last = cs.len() - 1;
    let mut inner = Formula::atom_vars("S", [&cs[last], out]);
    for i in (1..cs.len()).rev() {
        inner = Formula::exists(cs[i].clone(), Formula::and(Formula::atom_vars("S", [&cs[i - 1], &cs[i]]), inner));
    }
    Formula::exists(cs[0].clone(), Formula::and(Formula::atom_vars("Z", [&cs[0]]), inner))
}

/// The numeral of `n` in the number language, free in `out`.
///
/// Values below 4 are successor chains from `Z`. Larger values follow their
/// binary digits: each further digit doubles the previous witness with `A`
/// and adds a successor step when the digit is 1, giving `O(log n)`
/// quantifiers and `rho0` at most 2. Successive witnesses alternate between
/// two names; an inner binder only reuses a name that no longer occurs inside
/// it, so nothing is captured and indices stay small.
pub fn numeral_source(n: &Natural, out: &Var) -> Formula {
    let base = if &*out.name == "n" { "w" } else { "n" };
    if let Some(k) = u32::try_from(n).ok().filter(|&k| k < 4) {
        return unary(k, out, base);
    }
    let bits = n.significant_bits();
    let digit = |i: u64| n.get_bit(i);
    let steps = bits - 2;
    let witness = |s: u64| if s == steps { out.clone() } else { Var::new(base, (s % 2) as u32) };
    let carry = Var::new(base, 2);
    let mut f = unary(2 + u32::from(digit(bits - 2)), &witness(0), base);
    for s in 0..steps {
        let (prev, cur) = (witness(s), witness(s + 1));
        let step = if digit(steps - 1 - s) {
            Formula::exists(
                carry.clone(),
                Formula::and(Formula::atom_vars("A", [&prev, &prev, &carry]), Formula::atom_vars("S", [&carry, &cur])),
            )
        } else {
            Formula::atom_vars("A", [&prev, &prev, &cur])
        };
        f = Formula::exists(prev, Formula::and(f, step));
    }
    f
}

/// The numeral of `n` translated through the number translation, free in
/// the block of `out`.
pub fn numeral_at(n: &Natural, out: &Var, ctx: &ArithContext) -> Formula {
    ctx.numbers.apply(&numeral_source(n, out), None).expect("numeral is relational over the number language")
}

pub fn numeral(n: &Natural, ctx: &ArithContext) -> Numeral {
    let x = Var::new("x", 0);
    Numeral { formula: numeral_at(n, &x, ctx), block: block(&x, ctx.dim()) }
}

/// Replaces the free block `target` by the numeral of `value`. The smallest
/// subformula `phi` holding every free occurrence becomes
/// `exists l. (num(l) /\\ phi[target := l])` for a fresh block `l`, so the
/// numeral appears once.
pub fn substitute_numeral(f: &Formula, target: &[Var], value: &Natural, ctx: &ArithContext) -> Formula {
    let m = ctx.dim();
    let avoid = f.all_vars();
    let fresh = (0..)
        .map(|i| Var::new("l", i))
        .find(|c| block(c, m).iter().all(|v| !avoid.contains(v)))
        .expect("fresh block exists");
    let fresh_block = block(&fresh, m);
    let wrap = |phi: &Formula| -> Formula {
        let map: BTreeMap<Var, Term> = target.iter().cloned().zip(fresh_block.iter().map(Term::var)).collect();
        let num = numeral_at(value, &fresh, ctx);
        Formula::exists_many(&fresh_block, Formula::and(num, substitute_many(phi, &map)))
    };
    replace(f, target, &mut Vec::new(), &wrap)
}

fn occurs_free(f: &Formula, target: &[Var], shadowed: &mut Vec<Var>) -> bool {
    let term_hit = |t: &Term, shadowed: &[Var]| {
        let mut vs = BTreeSet::new();
        t.vars(&mut vs);
        vs.iter().any(|v| target.contains(v) && !shadowed.contains(v))
    };
    match f {
        Formula::Atom(_, args) => args.iter().any(|t| term_hit(t, shadowed)),
        Formula::Equals(a, b) => term_hit(a, shadowed) || term_hit(b, shadowed),
        Formula::Top | Formula::Bot => false,
        Formula::Not(a) => occurs_free(a, target, shadowed),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            occurs_free(a, target, shadowed) || occurs_free(b, target, shadowed)
        }
        Formula::Forall(v, a) | Formula::Exists(v, a) => {
            shadowed.push(v.clone());
            let r = occurs_free(a, target, shadowed);
            shadowed.pop();
            r
        }
    }
}

fn replace(f: &Formula, target: &[Var], shadowed: &mut Vec<Var>, wrap: &dyn Fn(&Formula) -> Formula) -> Formula {
    if !occurs_free(f, target, shadowed) {
        return f.clone();
    }
    match f {
        Formula::Not(a) => Formula::not(replace(a, target, shadowed, wrap)),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let (left, right) = (occurs_free(a, target, shadowed), occurs_free(b, target, shadowed));
            if left && right {
                return wrap(f);
            }
            let (a2, b2) = if left {
                (replace(a, target, shadowed, wrap), (**b).clone())
            } else {
                ((**a).clone(), replace(b, target, shadowed, wrap))
            };
            let (op, _, _) = f.as_binary().expect("binary");
            Formula::binary(op, a2, b2)
        }
        Formula::Forall(v, a) | Formula::Exists(v, a) => {
            shadowed.push(v.clone());
            let body = replace(a, target, shadowed, wrap);
            shadowed.pop();
            if matches!(f, Formula::Forall(..)) {
                Formula::forall(v.clone(), body)
            } else {
                Formula::exists(v.clone(), body)
            }
        }
        _ => wrap(f),
    }
}
