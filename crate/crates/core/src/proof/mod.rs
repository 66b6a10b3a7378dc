//! Checker for restricted provability: natural deduction in sequent style
//! where every formula of every sequent lies in Delta*_n (`rho0 <= n`).

mod file;
mod matching;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::complexity::profile;
use crate::fol::{alpha_eq, Formula, Term, Var};

pub use file::{parse_proof, ProofParseError};
use matching::{instance_term, replaces_some};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Assume,
    TopI,
    AndI,
    AndE1,
    AndE2,
    OrI1,
    OrI2,
    OrE,
    ImpI,
    ImpE,
    NotI,
    NotE,
    BotE,
    /// Classical reductio: from `G, ~A |- bot` infer `G |- A`.
    Raa,
    ForallI,
    ForallE,
    ExistsI,
    ExistsE,
    EqI,
    EqE,
}

impl Rule {
    pub const ALL: [Rule; 20] = [
        Rule::Assume,
        Rule::TopI,
        Rule::AndI,
        Rule::AndE1,
        Rule::AndE2,
        Rule::OrI1,
        Rule::OrI2,
        Rule::OrE,
        Rule::ImpI,
        Rule::ImpE,
        Rule::NotI,
        Rule::NotE,
        Rule::BotE,
        Rule::Raa,
        Rule::ForallI,
        Rule::ForallE,
        Rule::ExistsI,
        Rule::ExistsE,
        Rule::EqI,
        Rule::EqE,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Rule::Assume => "assume",
            Rule::TopI => "top_i",
            Rule::AndI => "and_i",
            Rule::AndE1 => "and_e1",
            Rule::AndE2 => "and_e2",
            Rule::OrI1 => "or_i1",
            Rule::OrI2 => "or_i2",
            Rule::OrE => "or_e",
            Rule::ImpI => "imp_i",
            Rule::ImpE => "imp_e",
            Rule::NotI => "not_i",
            Rule::NotE => "not_e",
            Rule::BotE => "bot_e",
            Rule::Raa => "raa",
            Rule::ForallI => "forall_i",
            Rule::ForallE => "forall_e",
            Rule::ExistsI => "exists_i",
            Rule::ExistsE => "exists_e",
            Rule::EqI => "eq_i",
            Rule::EqE => "eq_e",
        }
    }

    pub fn premise_count(self) -> usize {
        match self {
            Rule::Assume | Rule::TopI | Rule::EqI => 0,
            Rule::AndI | Rule::ImpE | Rule::NotE | Rule::ExistsE | Rule::EqE => 2,
            Rule::OrE => 3,
            _ => 1,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL.into_iter().find(|r| r.tag() == s).ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

/// `assumptions |- formula`; assumptions are compared as a set up to
/// renaming of bound variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Sequent {
    pub assumptions: Vec<Formula>,
    pub formula: Formula,
}

impl Sequent {
    pub fn new(assumptions: Vec<Formula>, formula: Formula) -> Sequent {
        Sequent { assumptions, formula }
    }

    fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.assumptions.iter().chain(std::iter::once(&self.formula))
    }

    fn has(&self, f: &Formula) -> bool {
        contains(&self.assumptions, f)
    }

    fn free_in_context(&self, v: &Var) -> bool {
        self.assumptions.iter().any(|a| a.free_vars().contains(v))
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx: Vec<String> = self.assumptions.iter().map(|a| a.to_string()).collect();
        if ctx.is_empty() {
            write!(f, "|- {}", self.formula)
        } else {
            write!(f, "{} |- {}", ctx.join(", "), self.formula)
        }
    }
}

fn contains(set: &[Formula], f: &Formula) -> bool {
    set.iter().any(|g| alpha_eq(g, f))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub sequent: Sequent,
    pub rule: Rule,
    /// Zero-based indices of earlier steps.
    pub premises: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProofObject {
    pub level: u32,
    pub steps: Vec<Step>,
    /// When present, the last step must prove exactly this sequent.
    pub theorem: Option<Sequent>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProofStats {
    pub step_count: usize,
    pub max_nu: u32,
    pub max_rho0: u32,
}

/// Step numbers in errors are one-based, as in proof files.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProofError {
    #[error("the proof has no steps")]
    Empty,
    #[error("step {step}: {rule} takes {expected} premises, got {got}")]
    PremiseCount { step: usize, rule: Rule, expected: usize, got: usize },
    #[error("step {step}: premise {premise} is not an earlier step")]
    PremiseOrder { step: usize, premise: usize },
    #[error("step {step}: bad application of {rule}: {reason}")]
    BadRule { step: usize, rule: Rule, reason: String },
    #[error("step {step}: {formula} has rho0 = {rho0}, above the level {level}")]
    Restriction { step: usize, formula: String, rho0: u32, level: u32 },
    #[error("step {step}: eigenvariable {var} occurs free where it must not")]
    Eigenvariable { step: usize, var: String },
    #[error("the last step proves {found}, not the stated theorem {claimed}")]
    Theorem { claimed: String, found: String },
}

struct StepCheck<'a> {
    index: usize,
    step: &'a Step,
    premises: Vec<&'a Sequent>,
}

impl<'a> StepCheck<'a> {
    fn concl(&self) -> &'a Sequent {
        &self.step.sequent
    }

    fn bad(&self, reason: impl Into<String>) -> ProofError {
        ProofError::BadRule { step: self.index + 1, rule: self.step.rule, reason: reason.into() }
    }

    fn ensure(&self, ok: bool, reason: &str) -> Result<(), ProofError> {
        if ok {
            Ok(())
        } else {
            Err(self.bad(reason))
        }
    }

    /// The premise's assumptions are among the conclusion's, plus `discharged`.
    fn context_within(&self, premise: usize, discharged: Option<&Formula>) -> Result<(), ProofError> {
        let concl = self.concl();
        for a in &self.premises[premise].assumptions {
            let allowed = concl.has(a) || discharged.is_some_and(|d| alpha_eq(a, d));
            if !allowed {
                return Err(self.bad(format!("assumption {a} of premise {} is not available", premise + 1)));
            }
        }
        Ok(())
    }

    fn formula(&self, premise: usize) -> &'a Formula {
        &self.premises[premise].formula
    }

    fn eigen(&self, v: &Var, also: &[&Formula]) -> Result<(), ProofError> {
        if self.concl().free_in_context(v) || also.iter().any(|f| f.free_vars().contains(v)) {
            return Err(ProofError::Eigenvariable { step: self.index + 1, var: v.to_string() });
        }
        Ok(())
    }

    fn run(&self) -> Result<(), ProofError> {
        use Formula as F;
        let goal = &self.concl().formula;
        match self.step.rule {
            Rule::Assume => self.ensure(self.concl().has(goal), "the formula is not among the assumptions"),
            Rule::TopI => self.ensure(*goal == F::Top, "top_i concludes top"),
            Rule::EqI => match goal {
                F::Equals(s, t) => self.ensure(s == t, "eq_i concludes t = t"),
                _ => Err(self.bad("eq_i concludes an identity")),
            },
            Rule::AndI => {
                let F::And(a, b) = goal else { return Err(self.bad("the conclusion is not a conjunction")) };
                self.context_within(0, None)?;
                self.context_within(1, None)?;
                self.ensure(alpha_eq(self.formula(0), a) && alpha_eq(self.formula(1), b), "premises do not match the conjuncts")
            }
            Rule::AndE1 | Rule::AndE2 => {
                self.context_within(0, None)?;
                let F::And(a, b) = self.formula(0) else { return Err(self.bad("the premise is not a conjunction")) };
                let part = if self.step.rule == Rule::AndE1 { a } else { b };
                self.ensure(alpha_eq(part, goal), "the conclusion is not the selected conjunct")
            }
            Rule::OrI1 | Rule::OrI2 => {
                let F::Or(a, b) = goal else { return Err(self.bad("the conclusion is not a disjunction")) };
                self.context_within(0, None)?;
                let part = if self.step.rule == Rule::OrI1 { a } else { b };
                self.ensure(alpha_eq(self.formula(0), part), "the premise is not the selected disjunct")
            }
            Rule::OrE => {
                let F::Or(a, b) = self.formula(0) else { return Err(self.bad("the first premise is not a disjunction")) };
                self.context_within(0, None)?;
                self.context_within(1, Some(a))?;
                self.context_within(2, Some(b))?;
                self.ensure(
                    alpha_eq(self.formula(1), goal) && alpha_eq(self.formula(2), goal),
                    "the case premises do not prove the conclusion",
                )
            }
            Rule::ImpI => {
                let F::Implies(a, b) = goal else { return Err(self.bad("the conclusion is not an implication")) };
                self.context_within(0, Some(a))?;
                self.ensure(alpha_eq(self.formula(0), b), "the premise does not prove the consequent")
            }
            Rule::ImpE => {
                let F::Implies(a, b) = self.formula(0) else { return Err(self.bad("the first premise is not an implication")) };
                self.context_within(0, None)?;
                self.context_within(1, None)?;
                self.ensure(alpha_eq(self.formula(1), a) && alpha_eq(b, goal), "premises do not match the implication")
            }
            Rule::NotI => {
                let F::Not(a) = goal else { return Err(self.bad("the conclusion is not a negation")) };
                self.context_within(0, Some(a))?;
                self.ensure(*self.formula(0) == F::Bot, "the premise does not prove bot")
            }
            Rule::NotE => {
                let F::Not(a) = self.formula(0) else { return Err(self.bad("the first premise is not a negation")) };
                self.context_within(0, None)?;
                self.context_within(1, None)?;
                self.ensure(alpha_eq(self.formula(1), a) && *goal == F::Bot, "not_e needs ~A and A and concludes bot")
            }
            Rule::BotE => {
                self.context_within(0, None)?;
                self.ensure(*self.formula(0) == F::Bot, "the premise does not prove bot")
            }
            Rule::Raa => {
                let negated = F::not(goal.clone());
                self.context_within(0, Some(&negated))?;
                self.ensure(*self.formula(0) == F::Bot, "the premise does not prove bot")
            }
            Rule::ForallI => {
                let F::Forall(x, body) = goal else { return Err(self.bad("the conclusion is not universal")) };
                self.context_within(0, None)?;
                match instance_term(body, x, self.formula(0)) {
                    Err(()) => Err(self.bad("the premise is not an instance of the body")),
                    Ok(None) => Ok(()),
                    Ok(Some(Term::Var(y))) => self.eigen(&y, &[goal]),
                    Ok(Some(t)) => Err(self.bad(format!("the eigenvariable position holds the term {t}"))),
                }
            }
            Rule::ForallE => {
                self.context_within(0, None)?;
                let F::Forall(x, body) = self.formula(0) else { return Err(self.bad("the premise is not universal")) };
                self.ensure(instance_term(body, x, goal).is_ok(), "the conclusion is not an instance of the premise")
            }
            Rule::ExistsI => {
                let F::Exists(x, body) = goal else { return Err(self.bad("the conclusion is not existential")) };
                self.context_within(0, None)?;
                self.ensure(instance_term(body, x, self.formula(0)).is_ok(), "the premise is not an instance of the body")
            }
            Rule::ExistsE => {
                let ex = self.formula(0);
                let F::Exists(x, body) = ex else { return Err(self.bad("the first premise is not existential")) };
                self.context_within(0, None)?;
                self.ensure(alpha_eq(self.formula(1), goal), "the second premise does not prove the conclusion")?;
                let extra: Vec<&Formula> = self.premises[1].assumptions.iter().filter(|a| !self.concl().has(a)).collect();
                match extra.as_slice() {
                    [] => Ok(()),
                    [witness] => match instance_term(body, x, witness) {
                        Ok(None) => self.context_within(1, Some(witness)),
                        Ok(Some(Term::Var(y))) => {
                            self.context_within(1, Some(witness))?;
                            self.eigen(&y, &[ex, goal])
                        }
                        _ => Err(self.bad("the discharged assumption is not an instance of the existential")),
                    },
                    _ => Err(self.bad("the second premise uses more than one new assumption")),
                }
            }
            Rule::EqE => {
                let F::Equals(s, t) = self.formula(0) else { return Err(self.bad("the first premise is not an identity")) };
                self.context_within(0, None)?;
                self.context_within(1, None)?;
                self.ensure(replaces_some(self.formula(1), goal, s, t), "the conclusion does not arise by replacing s with t")
            }
        }
    }
}

impl ProofObject {
    pub fn last(&self) -> Option<&Sequent> {
        self.steps.last().map(|s| &s.sequent)
    }

    /// Validates every rule application and the Delta*_n restriction.
    pub fn check(&self) -> Result<(), ProofError> {
        if self.steps.is_empty() {
            return Err(ProofError::Empty);
        }
        for (index, step) in self.steps.iter().enumerate() {
            for f in step.sequent.formulas() {
                let rho0 = profile(f).rho0;
                if rho0 > self.level {
                    return Err(ProofError::Restriction { step: index + 1, formula: f.to_string(), rho0, level: self.level });
                }
            }
            let expected = step.rule.premise_count();
            if step.premises.len() != expected {
                return Err(ProofError::PremiseCount { step: index + 1, rule: step.rule, expected, got: step.premises.len() });
            }
            if let Some(&p) = step.premises.iter().find(|&&p| p >= index) {
                return Err(ProofError::PremiseOrder { step: index + 1, premise: p + 1 });
            }
            let premises = step.premises.iter().map(|&p| &self.steps[p].sequent).collect();
            StepCheck { index, step, premises }.run()?;
        }
        if let (Some(claim), Some(last)) = (&self.theorem, self.last()) {
            let same = alpha_eq(&claim.formula, &last.formula)
                && claim.assumptions.iter().all(|a| last.has(a))
                && last.assumptions.iter().all(|a| claim.has(a));
            if !same {
                return Err(ProofError::Theorem { claimed: claim.to_string(), found: last.to_string() });
            }
        }
        Ok(())
    }

    /// Step count and the largest connective depth and `rho0` of the
    /// accepted proof.
    pub fn stats(&self) -> Result<ProofStats, ProofError> {
        self.check()?;
        let mut max_nu = 0;
        let mut max_rho0 = 0;
        for f in self.steps.iter().flat_map(|s| s.sequent.formulas()) {
            let p = profile(f);
            max_nu = max_nu.max(p.nu);
            max_rho0 = max_rho0.max(p.rho0);
        }
        Ok(ProofStats { step_count: self.steps.len(), max_nu, max_rho0 })
    }
}

pub fn check(proof: &ProofObject) -> Result<(), ProofError> {
    proof.check()
}

pub fn stats(proof: &ProofObject) -> Result<ProofStats, ProofError> {
    proof.stats()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn proof(text: &str) -> ProofObject {
        parse_proof(text).unwrap()
    }

    #[test]
    fn disjunction_introduction() {
        let p = proof("level 1\nstep 1: P |- P ; rule assume\nstep 2: P |- P \\/ Q ; rule or_i1 from 1\n");
        assert_eq!(p.check(), Ok(()));
        assert_eq!(p.stats().unwrap(), ProofStats { step_count: 2, max_nu: 1, max_rho0: 1 });
    }

    #[test]
    fn restriction_is_enforced() {
        let text = "step 1: forall x. exists y. R(x,y) |- forall x. exists y. R(x,y) ; rule assume\n";
        let err = proof(&format!("level 1\n{text}")).check().unwrap_err();
        assert_eq!(err, ProofError::Restriction { step: 1, formula: "forall x. exists y. R(x,y)".into(), rho0: 3, level: 1 });
        assert_eq!(proof(&format!("level 3\n{text}")).check(), Ok(()));
    }

    #[test]
    fn eigenvariable_condition() {
        // exists x P(x) |- forall x P(x) through the assumption P(x)
        let bad = proof(
            "level 3\n\
             step 1: exists x. P(x), P(x) |- P(x) ; rule assume\n\
             step 2: exists x. P(x), P(x) |- forall x. P(x) ; rule forall_i from 1\n\
             step 3: exists x. P(x) |- exists x. P(x) ; rule assume\n\
             step 4: exists x. P(x) |- forall x. P(x) ; rule exists_e from 3 2\n",
        );
        assert!(matches!(bad.check(), Err(ProofError::Eigenvariable { step: 2, .. })));
    }

    #[test]
    fn quantifier_rules() {
        let p = proof(
            "level 3\n\
             theorem forall x. (P(x) /\\ Q(x)) |- forall y. P(y)\n\
             step 1: forall x. (P(x) /\\ Q(x)) |- forall x. (P(x) /\\ Q(x)) ; rule assume\n\
             step 2: forall x. (P(x) /\\ Q(x)) |- P(y) /\\ Q(y) ; rule forall_e from 1\n\
             step 3: forall x. (P(x) /\\ Q(x)) |- P(y) ; rule and_e1 from 2\n\
             step 4: forall x. (P(x) /\\ Q(x)) |- forall y. P(y) ; rule forall_i from 3\n",
        );
        assert_eq!(p.check(), Ok(()));
    }

    #[test]
    fn existential_elimination() {
        let p = proof(
            "level 3\n\
             step 1: exists x. P(x) |- exists x. P(x) ; rule assume\n\
             step 2: exists x. P(x), P(y) |- P(y) ; rule assume\n\
             step 3: exists x. P(x), P(y) |- exists z. P(z) ; rule exists_i from 2\n\
             step 4: exists x. P(x) |- exists z. P(z) ; rule exists_e from 1 3\n",
        );
        assert_eq!(p.check(), Ok(()));
    }

    #[test]
    fn identity_rules() {
        let p = proof(
            "level 1\n\
             step 1: x = y |- x = y ; rule assume\n\
             step 2: x = y |- x = x ; rule eq_i\n\
             step 3: x = y |- y = x ; rule eq_e from 1 2\n",
        );
        assert_eq!(p.check(), Ok(()));
        let wrong = proof("level 1\nstep 1: x = y |- x = y ; rule assume\nstep 2: |- P(x) ; rule assume\nstep 3: x = y |- P(z) ; rule eq_e from 1 2\n");
        assert!(wrong.check().is_err());
    }

    #[test]
    fn classical_and_negation() {
        let p = proof(
            "level 2\n\
             theorem ~~P |- P\n\
             step 1: ~~P, ~P |- ~~P ; rule assume\n\
             step 2: ~~P, ~P |- ~P ; rule assume\n\
             step 3: ~~P, ~P |- bot ; rule not_e from 1 2\n\
             step 4: ~~P |- P ; rule raa from 3\n",
        );
        assert_eq!(p.check(), Ok(()));
    }

    #[test]
    fn structural_errors() {
        assert_eq!(ProofObject { level: 1, steps: vec![], theorem: None }.check(), Err(ProofError::Empty));
        let p = proof("level 1\nstep 1: P |- P ; rule and_e1 from 1\n");
        assert!(matches!(p.check(), Err(ProofError::PremiseOrder { step: 1, premise: 1 })));
        let p = proof("level 1\nstep 1: P |- P ; rule assume from\nstep 2: P |- P ; rule imp_e from 1\n");
        assert!(matches!(p.check(), Err(ProofError::PremiseCount { step: 2, expected: 2, got: 1, .. })));
        let p = proof("level 1\ntheorem |- P\nstep 1: P |- P ; rule assume\n");
        assert!(matches!(p.check(), Err(ProofError::Theorem { .. })));
    }

    #[test]
    fn weakened_premises_are_allowed() {
        let p = proof("level 1\nstep 1: P |- P ; rule assume\nstep 2: P, Q |- P /\\ P ; rule and_i from 1 1\n");
        assert_eq!(p.check(), Ok(()));
        let p = proof("level 1\nstep 1: P, Q |- P ; rule assume\nstep 2: P |- P /\\ P ; rule and_i from 1 1\n");
        assert!(p.check().is_err());
    }
}
