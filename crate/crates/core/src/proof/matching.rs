//! Instance checks for the quantifier and identity rules. Both walk two
//! formulas in parallel, tracking the binders on each side the way
//! `alpha_eq` does.

use crate::fol::{alpha_eq, substitute, Formula, Term, Var};

fn bound(env: &[Var], v: &Var) -> Option<usize> {
    env.iter().rposition(|w| w == v)
}

fn mentions_bound(t: &Term, env: &[Var]) -> bool {
    match t {
        Term::Var(v) => bound(env, v).is_some(),
        Term::App(_, args) => args.iter().any(|a| mentions_bound(a, env)),
    }
}

fn same_term(s: &Term, t: &Term, ea: &[Var], eb: &[Var]) -> bool {
    match (s, t) {
        (Term::Var(x), Term::Var(y)) => match (bound(ea, x), bound(eb, y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| same_term(x, y, ea, eb))
        }
        _ => false,
    }
}

/// Walks two formulas of the same shape, calling `leaf` on each pair of
/// corresponding terms. Fails on a shape mismatch or when `leaf` fails.
fn walk(
    a: &Formula,
    b: &Formula,
    ea: &mut Vec<Var>,
    eb: &mut Vec<Var>,
    leaf: &mut impl FnMut(&Term, &Term, &[Var], &[Var]) -> bool,
) -> bool {
    use Formula as F;
    match (a, b) {
        (F::Top, F::Top) | (F::Bot, F::Bot) => true,
        (F::Atom(p, xs), F::Atom(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| leaf(x, y, ea, eb))
        }
        (F::Equals(x1, x2), F::Equals(y1, y2)) => leaf(x1, y1, ea, eb) && leaf(x2, y2, ea, eb),
        (F::Not(x), F::Not(y)) => walk(x, y, ea, eb, leaf),
        (F::And(x1, x2), F::And(y1, y2)) | (F::Or(x1, x2), F::Or(y1, y2)) | (F::Implies(x1, x2), F::Implies(y1, y2)) => {
            walk(x1, y1, ea, eb, leaf) && walk(x2, y2, ea, eb, leaf)
        }
        (F::Forall(v, x), F::Forall(w, y)) | (F::Exists(v, x), F::Exists(w, y)) => {
            ea.push(v.clone());
            eb.push(w.clone());
            let ok = walk(x, y, ea, eb, leaf);
            ea.pop();
            eb.pop();
            ok
        }
        _ => false,
    }
}

/// Finds the term `t` with `instance = body[t/x]` (up to bound renaming).
/// `Ok(None)` when `x` is not free in `body` and the two agree; `Err` when
/// `instance` is not an instance, including when `t` would be captured.
pub fn instance_term(body: &Formula, x: &Var, instance: &Formula) -> Result<Option<Term>, ()> {
    let mut found: Option<Term> = None;
    let mut captured = false;
    let mut leaf = |s: &Term, t: &Term, ea: &[Var], eb: &[Var]| {
        find_in_term(s, t, x, ea, eb, &mut found, &mut captured);
        true
    };
    if !walk(body, instance, &mut Vec::new(), &mut Vec::new(), &mut leaf) || captured {
        return Err(());
    }
    match found {
        None => if alpha_eq(body, instance) { Ok(None) } else { Err(()) },
        Some(t) => {
            if alpha_eq(&substitute(body, x, &t), instance) {
                Ok(Some(t))
            } else {
                Err(())
            }
        }
    }
}

fn find_in_term(s: &Term, t: &Term, x: &Var, ea: &[Var], eb: &[Var], found: &mut Option<Term>, captured: &mut bool) {
    match (s, t) {
        (Term::Var(v), _) if v == x && bound(ea, v).is_none() => {
            if mentions_bound(t, eb) {
                *captured = true;
            } else if found.is_none() {
                *found = Some(t.clone());
            }
        }
        (Term::App(f, xs), Term::App(g, ys)) if f == g && xs.len() == ys.len() => {
            for (a, b) in xs.iter().zip(ys) {
                find_in_term(a, b, x, ea, eb, found, captured);
            }
        }
        _ => {}
    }
}

/// Whether `to` arises from `from` by replacing some free occurrences of
/// `s` with `t`.
pub fn replaces_some(from: &Formula, to: &Formula, s: &Term, t: &Term) -> bool {
    let mut leaf = |a: &Term, b: &Term, ea: &[Var], eb: &[Var]| replaced_term(a, b, s, t, ea, eb);
    walk(from, to, &mut Vec::new(), &mut Vec::new(), &mut leaf)
}

fn replaced_term(a: &Term, b: &Term, s: &Term, t: &Term, ea: &[Var], eb: &[Var]) -> bool {
    if same_term(a, b, ea, eb) {
        return true;
    }
    if a == s && b == t && !mentions_bound(s, ea) && !mentions_bound(t, eb) {
        return true;
    }
    match (a, b) {
        (Term::App(f, xs), Term::App(g, ys)) if f == g && xs.len() == ys.len() => {
            xs.iter().zip(ys).all(|(x, y)| replaced_term(x, y, s, t, ea, eb))
        }
        _ => false,
    }
}
