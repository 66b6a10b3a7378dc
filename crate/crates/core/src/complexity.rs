//! The alternation measures rho_E / rho_A, connective depth nu, and a
//! grammar-driven membership oracle for the starred classes.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::fol::shared::SharedMemo;
use crate::fol::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct ComplexityProfile {
    pub rho_e: u32,
    pub rho_a: u32,
    /// Always equal to `rho_e`.
    pub rho: u32,
    pub rho0: u32,
    pub nu: u32,
}

impl ComplexityProfile {
    fn from_pair(rho_e: u32, rho_a: u32, nu: u32) -> ComplexityProfile {
        ComplexityProfile { rho_e, rho_a, rho: rho_e, rho0: rho_e.max(rho_a), nu }
    }
}

impl fmt::Display for ComplexityProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rhoE={} rhoA={} rho0={} nu={}", self.rho_e, self.rho_a, self.rho0, self.nu)
    }
}

/// Measures a relational formula. Atoms, `top` and `bot` get (1, 1) and depth 0.
pub fn profile(f: &Formula) -> ComplexityProfile {
    profile_with(f, &|_: &str| None)
}

/// Like [`profile`], but atoms whose predicate is known to `atom_rho` count as
/// the stipulated `(rho_e, rho_a)` pair instead of `(1, 1)`.
pub fn profile_with(f: &Formula, atom_rho: &dyn Fn(&str) -> Option<(u32, u32)>) -> ComplexityProfile {
    let (e, a, nu) = measure(f, atom_rho);
    ComplexityProfile::from_pair(e, a, nu)
}

type Measure = (u32, u32, u32);

fn measure(f: &Formula, atom_rho: &dyn Fn(&str) -> Option<(u32, u32)>) -> Measure {
    measure_with(f, atom_rho, &mut SharedMemo::new())
}

fn measure_with(f: &Formula, atom_rho: &dyn Fn(&str) -> Option<(u32, u32)>, memo: &mut SharedMemo<Measure>) -> Measure {
    let mut sub = |b: &Arc<Formula>| memo.get_or(b, |m| measure_with(b, atom_rho, m));
    match f {
        Formula::Atom(p, _) => {
            let (e, a) = atom_rho(p).unwrap_or((1, 1));
            (e, a, 0)
        }
        Formula::Equals(..) | Formula::Top | Formula::Bot => (1, 1, 0),
        Formula::Not(b) => {
            let (e, a, nu) = sub(b);
            (a, e, nu + 1)
        }
        Formula::And(b, c) | Formula::Or(b, c) => {
            let (be, ba, bn) = sub(b);
            let (ce, ca, cn) = sub(c);
            (be.max(ce), ba.max(ca), bn.max(cn) + 1)
        }
        Formula::Implies(b, c) => {
            let (be, ba, bn) = sub(b);
            let (ce, ca, cn) = sub(c);
            (ba.max(ce), be.max(ca), bn.max(cn) + 1)
        }
        Formula::Exists(_, b) => {
            let (e, _, nu) = sub(b);
            (e, e + 1, nu + 1)
        }
        Formula::Forall(_, b) => {
            let (_, a, nu) = sub(b);
            (a + 1, a, nu + 1)
        }
    }
}

/// Connective depth alone.
pub fn nu(f: &Formula) -> u32 {
    measure(f, &|_: &str| None).2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassKind {
    SigmaStar,
    PiStar,
    DeltaStar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ClassId {
    pub kind: ClassKind,
    pub level: u32,
}

impl ClassId {
    pub fn sigma(level: u32) -> ClassId {
        ClassId { kind: ClassKind::SigmaStar, level }
    }
    pub fn pi(level: u32) -> ClassId {
        ClassId { kind: ClassKind::PiStar, level }
    }
    pub fn delta(level: u32) -> ClassId {
        ClassId { kind: ClassKind::DeltaStar, level }
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            ClassKind::SigmaStar => "Sigma*",
            ClassKind::PiStar => "Pi*",
            ClassKind::DeltaStar => "Delta*",
        };
        write!(f, "{k}_{}", self.level)
    }
}

/// Decides membership by recursion on the inductive grammars of the classes,
/// without consulting the measure. Levels above `nu + 1` are clamped, since
/// every formula already belongs to both classes there.
pub fn class_member(f: &Formula, class: ClassId) -> bool {
    let level = class.level.min(nu(f) + 1);
    Oracle::default().member(f, class.kind, level)
}

#[derive(Default)]
struct Oracle {
    memo: HashMap<(usize, ClassKind, u32), bool>,
}

impl Oracle {
    fn member(&mut self, f: &Formula, kind: ClassKind, level: u32) -> bool {
        if level == 0 {
            return false;
        }
        let key = (f as *const Formula as usize, kind, level);
        if let Some(&hit) = self.memo.get(&key) {
            return hit;
        }
        use ClassKind::*;
        let r = match (kind, f) {
            (_, Formula::Atom(..) | Formula::Equals(..) | Formula::Top | Formula::Bot) => true,
            (SigmaStar, Formula::Not(b)) => self.member(b, PiStar, level),
            (PiStar, Formula::Not(b)) => self.member(b, SigmaStar, level),
            (DeltaStar, Formula::Not(b)) => self.member(b, DeltaStar, level),
            (_, Formula::And(b, c) | Formula::Or(b, c)) => {
                self.member(b, kind, level) && self.member(c, kind, level)
            }
            (SigmaStar, Formula::Implies(b, c)) => self.member(b, PiStar, level) && self.member(c, SigmaStar, level),
            (PiStar, Formula::Implies(b, c)) => self.member(b, SigmaStar, level) && self.member(c, PiStar, level),
            (DeltaStar, Formula::Implies(b, c)) => {
                self.member(b, DeltaStar, level) && self.member(c, DeltaStar, level)
            }
            (SigmaStar, Formula::Exists(_, b)) => self.member(b, SigmaStar, level),
            (PiStar | DeltaStar, Formula::Exists(_, b)) => self.member(b, SigmaStar, level - 1),
            (PiStar, Formula::Forall(_, b)) => self.member(b, PiStar, level),
            (SigmaStar | DeltaStar, Formula::Forall(_, b)) => self.member(b, PiStar, level - 1),
        };
        self.memo.insert(key, r);
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_lenient;

    const TREE: &str = "forall x. ((forall y. exists z. P(x,y,z)) -> exists u. exists v. Q(x,u,v))";

    #[test]
    fn parse_tree_formula() {
        let p = profile(&parse_lenient(TREE).unwrap());
        assert_eq!((p.rho_e, p.rho_a, p.rho0), (4, 3, 4));
        assert_eq!(p.rho, p.rho_e);
        assert_eq!(p.to_string(), "rhoE=4 rhoA=3 rho0=4 nu=4");
    }

    #[test]
    fn unparenthesized_variant_scopes_over_the_arrow() {
        let f = parse_lenient("forall x. (forall y. exists z. P(x,y,z) -> exists u. exists v. Q(x,u,v))").unwrap();
        assert_eq!(profile(&f).rho_e, 3);
    }

    #[test]
    fn atoms_are_unit() {
        for s in ["P(x)", "x = y", "top", "bot"] {
            let p = profile(&parse_lenient(s).unwrap());
            assert_eq!((p.rho_e, p.rho_a, p.rho, p.rho0, p.nu), (1, 1, 1, 1, 0));
        }
    }

    #[test]
    fn oracle_examples() {
        let qf = parse_lenient("(P(x) -> ~Q(x)) /\\ x = y").unwrap();
        assert!(class_member(&qf, ClassId::sigma(1)));
        assert!(class_member(&qf, ClassId::pi(1)));
        assert!(!class_member(&qf, ClassId::sigma(0)));
        let s = parse_lenient("exists v. forall w. R(v,w)").unwrap();
        assert!(class_member(&s, ClassId::sigma(2)));
        assert!(class_member(&parse_lenient("exists u. exists v. forall w. R(v,w)").unwrap(), ClassId::delta(3)));
        assert!(!class_member(&parse_lenient("exists u. exists v. forall w. R(v,w)").unwrap(), ClassId::delta(2)));
        let tree = parse_lenient(TREE).unwrap();
        assert!(class_member(&tree, ClassId::sigma(4)));
        assert!(!class_member(&tree, ClassId::sigma(3)));
        assert!(class_member(&tree, ClassId::pi(3)));
    }

    #[test]
    fn stipulated_atoms() {
        let f = parse_lenient("exists z. Sub(x,y,z)").unwrap();
        let p = profile_with(&f, &|name: &str| (name == "Sub").then_some((4, 4)));
        assert_eq!((p.rho_e, p.rho_a), (4, 5));
    }
}
