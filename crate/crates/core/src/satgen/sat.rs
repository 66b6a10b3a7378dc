use std::fmt;

use super::{atom_code_name, plug, Satgen, SatgenError};
use crate::complexity::{profile, ComplexityProfile};
use crate::fol::{Formula, Signature, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SatMode {
    /// The previous level occurs twice per step.
    Naive,
    /// The previous level occurs once per step.
    Optimized,
}

impl fmt::Display for SatMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SatMode::Naive => "naive",
            SatMode::Optimized => "optimized",
        })
    }
}

impl std::str::FromStr for SatMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(SatMode::Naive),
            "optimized" => Ok(SatMode::Optimized),
            _ => Err(format!("unknown mode `{s}` (expected naive or optimized)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `sat_n(i, alpha, phi)` over the frame extended by `theta`.
#[derive(Clone, Debug)]
pub struct SatFamily {
    pub n: u32,
    pub theta: Signature,
    pub mode: SatMode,
    pub formula: Formula,
}

impl SatFamily {
    /// The sign, assignment and formula variables `i`, `alpha`, `phi`.
    pub fn designated() -> [Var; 3] {
        [Var::new("i", 0), Var::new("alpha", 0), Var::new("phi", 0)]
    }

    pub fn profile(&self) -> ComplexityProfile {
        profile(&self.formula)
    }

    /// The formula with the sign variable fixed: free `Pos(i)` / `Neg(i)`
    /// atoms become `top` / `bot`, then constants are folded.
    pub fn branch(&self, sign: Sign) -> Formula {
        let i = &SatFamily::designated()[0];
        fix_sign(&self.formula, i, sign).simplify_constants()
    }
}

fn fix_sign(f: &Formula, i: &Var, sign: Sign) -> Formula {
    match f {
        Formula::Atom(p, args) if args.len() == 1 && args[0].as_var() == Some(i) => {
            match (&**p, sign) {
                ("Pos", Sign::Plus) | ("Neg", Sign::Minus) => Formula::Top,
                ("Pos", Sign::Minus) | ("Neg", Sign::Plus) => Formula::Bot,
                _ => f.clone(),
            }
        }
        Formula::Atom(..) | Formula::Equals(..) | Formula::Top | Formula::Bot => f.clone(),
        Formula::Not(a) => Formula::not(fix_sign(a, i, sign)),
        Formula::And(a, b) => Formula::and(fix_sign(a, i, sign), fix_sign(b, i, sign)),
        Formula::Or(a, b) => Formula::or(fix_sign(a, i, sign), fix_sign(b, i, sign)),
        Formula::Implies(a, b) => Formula::implies(fix_sign(a, i, sign), fix_sign(b, i, sign)),
        Formula::Forall(v, _) | Formula::Exists(v, _) if v == i => f.clone(),
        Formula::Forall(v, a) => Formula::forall(v.clone(), fix_sign(a, i, sign)),
        Formula::Exists(v, a) => Formula::exists(v.clone(), fix_sign(a, i, sign)),
    }
}

impl Satgen {
    /// The atomic clauses: under `+` every coded atom holds at the values of
    /// `b`, under `-` it fails. One conjunct per object predicate, plus
    /// `top`, `bot` and identity.
    fn atom_clauses(&self, b: &Var, a: &Var, positive: bool) -> Result<Formula, SatgenError> {
        let lit = |f: Formula| if positive { f } else { Formula::not(f) };
        let val = |u: &Var, x: &Var| Formula::atom_vars("val", [b, u, x]);
        let mut parts = vec![
            Formula::implies(Formula::atom_vars("FmTop", [a]), if positive { Formula::Top } else { Formula::Bot }),
            Formula::implies(Formula::atom_vars("FmBot", [a]), if positive { Formula::Bot } else { Formula::Top }),
        ];
        let (u, v, x, y) = (Var::new("u", 0), Var::new("v", 0), Var::new("x", 0), Var::new("y", 0));
        parts.push(Formula::forall_many(
            &[u.clone(), v.clone()],
            Formula::implies(
                Formula::atom_vars("FmEq", [a, &u, &v]),
                Formula::exists_many(
                    &[x.clone(), y.clone()],
                    Formula::conj([val(&u, &x), val(&v, &y), lit(Formula::eq_vars(&x, &y))]),
                ),
            ),
        ));
        for (p, k) in self.theta.preds() {
            let us: Vec<Var> = (1..=k).map(|j| Var::new("u", j as u32)).collect();
            let xs: Vec<Var> = (1..=k).map(|j| Var::new("x", j as u32)).collect();
            let code_args: Vec<Var> = std::iter::once(a.clone()).chain(us.iter().cloned()).collect();
            let values = us.iter().zip(&xs).map(|(u, x)| val(u, x));
            let body = Formula::exists_many(&xs, Formula::conj(values.chain([lit(Formula::atom_vars(p, &xs))])));
            parts.push(Formula::forall_many(
                &us,
                Formula::implies(Formula::atom_vars(&atom_code_name(p), &code_args), body),
            ));
        }
        self.templates.expand(&Formula::conj(parts), &|_, _| None)
    }

    /// `sat_n`. Level 0 is `(Pos(i) /\ bot) \/ (Neg(i) /\ top)`; each further
    /// level instantiates the adequacy step with the previous level in place
    /// of `Sat`.
    pub fn gen_sat(&self, n: u32, mode: SatMode) -> Result<SatFamily, SatgenError> {
        self.check_cap(n)?;
        self.sat_uncapped(n, mode)
    }

    pub(super) fn sat_uncapped(&self, n: u32, mode: SatMode) -> Result<SatFamily, SatgenError> {
        let designated = SatFamily::designated();
        let step = match mode {
            SatMode::Naive => "step_naive",
            SatMode::Optimized => "step_optimized",
        };
        let mut cur = self.templates.instantiate("sat0", &designated[..1], &|_, _| None)?;
        let (b, a) = (Var::new("b", 0), Var::new("a", 0));
        let atoms_true = self.atom_clauses(&b, &a, true)?;
        let atoms_false = self.atom_clauses(&b, &a, false)?;
        for _ in 0..n {
            let prev = cur;
            let resolve = |name: &str, args: &[Var]| -> Option<Formula> {
                match (name, args.len()) {
                    ("Sat", 3) => Some(plug(&prev, &designated, args)),
                    ("AtomsTrue", 2) => Some(plug(&atoms_true, &[b.clone(), a.clone()], args)),
                    ("AtomsFalse", 2) => Some(plug(&atoms_false, &[b.clone(), a.clone()], args)),
                    _ => None,
                }
            };
            cur = self.templates.instantiate(step, &designated, &resolve)?;
        }
        Ok(SatFamily { n, theta: self.theta.clone(), mode, formula: cur })
    }
}

/// Generates `sat_n` for `theta` with the default cap.
pub fn gen_sat(n: u32, theta: &Signature, mode: SatMode) -> Result<SatFamily, SatgenError> {
    Satgen::new(theta)?.gen_sat(n, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse;
    use crate::satgen::xstar;

    fn theta() -> Signature {
        Signature::with_preds("T", &[("P", 2), ("Q", 1)]).unwrap()
    }

    #[test]
    fn level_zero_branches() {
        let s = gen_sat(0, &theta(), SatMode::Optimized).unwrap();
        assert_eq!(s.branch(Sign::Plus), Formula::Bot);
        assert_eq!(s.branch(Sign::Minus), Formula::Top);
    }

    #[test]
    fn free_variables_are_documented() {
        let g = Satgen::new(&theta()).unwrap();
        let [i, alpha, phi] = SatFamily::designated();
        for mode in [SatMode::Naive, SatMode::Optimized] {
            let s0 = g.gen_sat(0, mode).unwrap();
            assert_eq!(s0.formula.free_vars().into_iter().collect::<Vec<_>>(), vec![i.clone()]);
            for n in 1..=3 {
                let s = g.gen_sat(n, mode).unwrap();
                let mut want = vec![alpha.clone(), i.clone(), phi.clone(), xstar()];
                want.sort();
                assert_eq!(s.formula.free_vars().into_iter().collect::<Vec<_>>(), want, "{mode} {n}");
            }
        }
    }

    #[test]
    fn generated_formulas_parse_back() {
        let g = Satgen::new(&theta()).unwrap();
        let s = g.gen_sat(2, SatMode::Optimized).unwrap();
        let back = parse(&s.formula.to_string(), g.signature()).unwrap();
        assert_eq!(back, s.formula);
    }

    #[test]
    fn cap_is_enforced() {
        let g = Satgen::new(&theta()).unwrap().with_cap(3);
        assert!(matches!(g.gen_sat(4, SatMode::Optimized), Err(SatgenError::CapExceeded { n: 4, cap: 3 })));
    }

    #[test]
    fn every_object_predicate_has_clauses() {
        let g = Satgen::new(&theta()).unwrap();
        let s = g.gen_sat(1, SatMode::Optimized).unwrap();
        let preds = s.formula.predicates();
        for p in ["P", "Q", "At_P", "At_Q", "FmEx", "FmAll", "In"] {
            assert!(preds.contains_key(p), "{p}");
        }
        assert!(!preds.contains_key("Sat") && !preds.contains_key("val"));
    }

    #[test]
    fn optimized_step_uses_previous_level_once() {
        let g = Satgen::new(&theta()).unwrap();
        let count = |mode| {
            let def = g.templates().get(if mode == SatMode::Naive { "clauses_naive" } else { "cl_lm" }).unwrap();
            let mut k = 0;
            let full = g.templates().expand(&def.body, &|_, _| None).unwrap();
            full.visit(&mut |f| {
                if matches!(f, Formula::Atom(p, _) if &**p == "Sat") {
                    k += 1;
                }
            });
            k
        };
        assert_eq!(count(SatMode::Naive), 2);
        assert_eq!(count(SatMode::Optimized), 1);
    }
}
