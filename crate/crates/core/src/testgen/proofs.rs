use rand::seq::SliceRandom;
use rand::Rng;

use super::{countermodel, FormulaShape};
use crate::complexity::profile;
use crate::fol::{alpha_eq, substitute, Formula, Term, Var};
use crate::proof::{ProofObject, Rule, Sequent, Step};

fn vocabulary() -> FormulaShape {
    FormulaShape::new(&[("P", 1), ("Q", 1), ("R", 2)], &["x", "y"], 2)
}

const POOL: [&str; 4] = ["x", "y", "z", "u"];

/// Grows a proof forward from assumptions. Each new step applies a rule to
/// earlier steps, so every step is valid by construction.
struct Builder {
    steps: Vec<Step>,
    heights: Vec<u32>,
    max_height: u32,
    shape: FormulaShape,
}

fn union(contexts: &[&[Formula]]) -> Vec<Formula> {
    let mut out: Vec<Formula> = Vec::new();
    for f in contexts.iter().flat_map(|c| c.iter()) {
        if !out.iter().any(|g| alpha_eq(f, g)) {
            out.push(f.clone());
        }
    }
    out
}

fn without(ctx: &[Formula], f: &Formula) -> Vec<Formula> {
    ctx.iter().filter(|g| !alpha_eq(f, g)).cloned().collect()
}

impl Builder {
    fn ctx(&self, i: usize) -> &[Formula] {
        &self.steps[i].sequent.assumptions
    }

    fn goal(&self, i: usize) -> &Formula {
        &self.steps[i].sequent.formula
    }

    fn push(&mut self, assumptions: Vec<Formula>, formula: Formula, rule: Rule, premises: Vec<usize>) -> usize {
        let height = 1 + premises.iter().map(|&p| self.heights[p]).max().unwrap_or(0);
        self.steps.push(Step { sequent: Sequent::new(assumptions, formula), rule, premises });
        self.heights.push(height);
        self.steps.len() - 1
    }

    fn assume(&mut self, f: Formula) -> usize {
        self.push(vec![f.clone()], f, Rule::Assume, vec![])
    }

    /// Steps usable as premises, optionally filtered by the shape of their formula.
    fn usable(&self, pred: impl Fn(&Formula) -> bool) -> Vec<usize> {
        (0..self.steps.len()).filter(|&i| self.heights[i] < self.max_height && pred(self.goal(i))).collect()
    }

    fn pick(&self, rng: &mut impl Rng, pred: impl Fn(&Formula) -> bool) -> Option<usize> {
        self.usable(pred).choose(rng).copied()
    }

    fn var(rng: &mut impl Rng) -> Var {
        Var::new(POOL.choose(rng).expect("non-empty"), 0)
    }

    /// One random rule application; `false` when the chosen rule found no
    /// suitable premises.
    fn grow(&mut self, rng: &mut impl Rng) -> bool {
        use Formula as F;
        let any = |_: &Formula| true;
        match rng.gen_range(0..17) {
            0 => {
                let f = self.shape.formula(rng);
                self.assume(f);
            }
            1 => {
                let v = Builder::var(rng);
                if rng.gen_bool(0.5) {
                    self.push(vec![], F::Top, Rule::TopI, vec![]);
                } else {
                    self.push(vec![], F::eq_vars(&v, &v), Rule::EqI, vec![]);
                }
            }
            2 => {
                let (Some(i), Some(j)) = (self.pick(rng, any), self.pick(rng, any)) else { return false };
                let f = F::and(self.goal(i).clone(), self.goal(j).clone());
                self.push(union(&[self.ctx(i), self.ctx(j)]), f, Rule::AndI, vec![i, j]);
            }
            3 => {
                let Some(i) = self.pick(rng, |f| matches!(f, F::And(..))) else { return false };
                let F::And(a, b) = self.goal(i).clone() else { unreachable!() };
                let (part, rule) = if rng.gen_bool(0.5) { (a, Rule::AndE1) } else { (b, Rule::AndE2) };
                self.push(self.ctx(i).to_vec(), (*part).clone(), rule, vec![i]);
            }
            4 => {
                let Some(i) = self.pick(rng, any) else { return false };
                let other = self.shape.formula(rng);
                let (f, rule) = if rng.gen_bool(0.5) {
                    (F::or(self.goal(i).clone(), other), Rule::OrI1)
                } else {
                    (F::or(other, self.goal(i).clone()), Rule::OrI2)
                };
                self.push(self.ctx(i).to_vec(), f, rule, vec![i]);
            }
            5 => {
                let Some(i) = self.pick(rng, any) else { return false };
                let a = match self.ctx(i).choose(rng) {
                    Some(a) if rng.gen_bool(0.8) => a.clone(),
                    _ => self.shape.formula(rng),
                };
                let f = F::implies(a.clone(), self.goal(i).clone());
                self.push(without(self.ctx(i), &a), f, Rule::ImpI, vec![i]);
            }
            6 => {
                let Some(i) = self.pick(rng, |f| matches!(f, F::Implies(..))) else { return false };
                let F::Implies(a, b) = self.goal(i).clone() else { unreachable!() };
                let j = match self.pick(rng, |f| alpha_eq(f, &a)) {
                    Some(j) => j,
                    None => self.assume((*a).clone()),
                };
                self.push(union(&[self.ctx(i), self.ctx(j)]), (*b).clone(), Rule::ImpE, vec![i, j]);
            }
            7 | 8 => {
                // a contradiction from A and ~A, then one of the bot rules
                let a = self.shape.formula(rng);
                let neg = F::not(a.clone());
                let (i, j) = (self.assume(neg.clone()), self.assume(a.clone()));
                let bot = self.push(vec![neg.clone(), a.clone()], F::Bot, Rule::NotE, vec![i, j]);
                if self.heights[bot] >= self.max_height {
                    return true;
                }
                match rng.gen_range(0..3) {
                    0 => self.push(vec![neg.clone()], neg, Rule::NotI, vec![bot]),
                    1 => self.push(vec![a.clone()], a, Rule::Raa, vec![bot]),
                    _ => {
                        let c = self.shape.formula(rng);
                        self.push(vec![neg, a], c, Rule::BotE, vec![bot])
                    }
                };
            }
            9 | 10 => {
                let Some(i) = self.pick(rng, any) else { return false };
                let ctx_free: std::collections::BTreeSet<Var> =
                    self.ctx(i).iter().flat_map(|a| a.free_vars()).collect();
                let candidates: Vec<Var> = self.goal(i).free_vars().into_iter().filter(|v| !ctx_free.contains(v)).collect();
                let v = match candidates.choose(rng) {
                    Some(v) => v.clone(),
                    None => Builder::var(rng),
                };
                if ctx_free.contains(&v) {
                    return false;
                }
                let f = F::forall(v, self.goal(i).clone());
                self.push(self.ctx(i).to_vec(), f, Rule::ForallI, vec![i]);
            }
            11 => {
                let Some(i) = self.pick(rng, |f| matches!(f, F::Forall(..))) else { return false };
                let F::Forall(x, body) = self.goal(i).clone() else { unreachable!() };
                let t = Term::Var(Builder::var(rng));
                self.push(self.ctx(i).to_vec(), substitute(&body, &x, &t), Rule::ForallE, vec![i]);
            }
            12 | 13 => {
                let Some(i) = self.pick(rng, any) else { return false };
                let goal = self.goal(i).clone();
                let taken = goal.all_vars();
                let Some(w) = ["w", "v", "s"].iter().map(|n| Var::new(n, 0)).find(|w| !taken.contains(w)) else {
                    return false;
                };
                let body = match goal.free_vars().into_iter().collect::<Vec<_>>().choose(rng) {
                    Some(t) => substitute(&goal, t, &Term::Var(w.clone())),
                    None => goal,
                };
                self.push(self.ctx(i).to_vec(), F::exists(w, body), Rule::ExistsI, vec![i]);
            }
            14 => {
                let Some(i) = self.pick(rng, |f| matches!(f, F::Exists(..))) else { return false };
                let ex = self.goal(i).clone();
                let F::Exists(x, body) = &ex else { unreachable!() };
                let ctx_free: std::collections::BTreeSet<Var> =
                    self.ctx(i).iter().flat_map(|a| a.free_vars()).chain(ex.free_vars()).collect();
                let Some(y) = POOL.iter().map(|n| Var::new(n, 0)).find(|y| !ctx_free.contains(y)) else { return false };
                let witness = substitute(body, x, &Term::Var(y));
                let a = self.assume(witness.clone());
                if self.heights[a] + 1 >= self.max_height {
                    return true;
                }
                let back = self.push(vec![witness], ex.clone(), Rule::ExistsI, vec![a]);
                self.push(self.ctx(i).to_vec(), ex, Rule::ExistsE, vec![i, back]);
            }
            15 => {
                // case split proving the commuted disjunction
                let Some(i) = self.pick(rng, |f| matches!(f, F::Or(..))) else { return false };
                if self.max_height < 3 {
                    return false;
                }
                let F::Or(a, b) = self.goal(i).clone() else { unreachable!() };
                let swapped = F::Or(b.clone(), a.clone());
                let left = self.assume((*a).clone());
                let left = self.push(vec![(*a).clone()], swapped.clone(), Rule::OrI2, vec![left]);
                let right = self.assume((*b).clone());
                let right = self.push(vec![(*b).clone()], swapped.clone(), Rule::OrI1, vec![right]);
                self.push(self.ctx(i).to_vec(), swapped, Rule::OrE, vec![i, left, right]);
            }
            _ => {
                let (s, t) = (Builder::var(rng), Builder::var(rng));
                let Some(j) = self.pick(rng, |f| f.free_vars().contains(&s)) else { return false };
                let eq = self.assume(F::eq_vars(&s, &t));
                let f = substitute(self.goal(j), &s, &Term::Var(t));
                self.push(union(&[self.ctx(eq), self.ctx(j)]), f, Rule::EqE, vec![eq, j]);
            }
        }
        true
    }
}

/// A valid proof of height at most `max_height` (at least 2) over `P`,
/// `Q`, `R`. The level is the largest `rho0` in the proof and the
/// theorem is the last sequent.
pub fn random_proof(rng: &mut impl Rng, max_height: u32) -> ProofObject {
    let mut b = Builder { steps: Vec::new(), heights: Vec::new(), max_height: max_height.max(2), shape: vocabulary() };
    let first = b.shape.formula(rng);
    b.assume(first);
    let target = rng.gen_range(3..=10);
    while b.steps.len() < target {
        b.grow(rng);
    }
    let level = b.steps.iter().flat_map(|s| s.sequent.assumptions.iter().chain([&s.sequent.formula])).map(|f| profile(f).rho0).max().unwrap_or(1);
    let theorem = b.steps.last().map(|s| s.sequent.clone());
    ProofObject { level, steps: b.steps, theorem }
}

/// A single corruption of one step's sequent.
#[derive(Clone, Debug)]
pub struct Mutation {
    pub proof: ProofObject,
    /// Zero-based index of the altered step.
    pub step: usize,
    pub description: String,
}

fn rename_predicate(f: &Formula, from: &str, to: &str) -> Formula {
    f.map_atoms(&mut |a| match a {
        Formula::Atom(p, args) if &**p == from => Formula::atom(to, args.clone()),
        _ => a.clone(),
    })
}

/// Alters the sequent of one random step. Returns `None` when the altered
/// sequent has no countermodel of size at most 3, since such a change may
/// leave the proof valid.
pub fn mutate_proof(rng: &mut impl Rng, proof: &ProofObject) -> Option<Mutation> {
    let step = rng.gen_range(0..proof.steps.len());
    let mut out = proof.clone();
    let seq = &mut out.steps[step].sequent;
    let description = match rng.gen_range(0..5) {
        0 => {
            seq.formula = Formula::not(seq.formula.clone());
            "negated the conclusion".to_string()
        }
        1 if !seq.assumptions.is_empty() => {
            let k = rng.gen_range(0..seq.assumptions.len());
            let dropped = seq.assumptions.remove(k);
            format!("dropped assumption {dropped}")
        }
        2 => {
            let preds = seq.formula.predicates();
            let names: Vec<&String> = preds.keys().filter(|p| preds[*p] == 1).collect();
            let Some(from) = names.choose(rng) else { return None };
            let to = if from.as_str() == "P" { "Q" } else { "P" };
            seq.formula = rename_predicate(&seq.formula, from, to);
            format!("renamed {from} to {to} in the conclusion")
        }
        3 => {
            let free: Vec<Var> = seq.formula.free_vars().into_iter().collect();
            let Some(v) = free.choose(rng) else { return None };
            let t = Var::new(POOL.choose(rng).expect("non-empty"), 0);
            seq.formula = substitute(&seq.formula, v, &Term::Var(t.clone()));
            format!("replaced {v} by {t} in the conclusion")
        }
        _ => {
            seq.formula = vocabulary().formula(rng);
            "replaced the conclusion".to_string()
        }
    };
    if out.steps[step] == proof.steps[step] {
        return None;
    }
    if out.theorem.is_some() && step + 1 == out.steps.len() {
        out.theorem = Some(out.steps[step].sequent.clone());
    }
    countermodel(&out.steps[step].sequent, 3).ok()??;
    Some(Mutation { proof: out, step, description })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testgen::rng;

    #[test]
    fn generated_proofs_check() {
        let mut r = rng(5);
        let mut rules = std::collections::BTreeSet::new();
        for _ in 0..300 {
            let p = random_proof(&mut r, 4);
            assert_eq!(p.check(), Ok(()), "{p}");
            rules.extend(p.steps.iter().map(|s| s.rule));
        }
        assert_eq!(rules.len(), Rule::ALL.len(), "{rules:?}");
    }

    #[test]
    fn mutations_are_rejected() {
        let mut r = rng(9);
        let mut found = 0;
        while found < 40 {
            let p = random_proof(&mut r, 4);
            if let Some(m) = mutate_proof(&mut r, &p) {
                assert!(m.proof.check().is_err(), "{} accepted after: {}", m.proof, m.description);
                found += 1;
            }
        }
    }
}
