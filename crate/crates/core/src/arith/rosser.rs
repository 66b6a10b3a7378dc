use std::collections::BTreeSet;

use super::{godel_decode, godel_encode, substitute_numeral, ArithContext, ArithError, GodelCode, PROV, SUB};
use crate::fol::{fresh_var, Formula, Term, Var};
use crate::translations::block;

/// `left <= right` (or `<` when strict) between two relativized existentials
/// `exists x in delta_N. A0(x)` and `exists y in delta_N. B0(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessComparison {
    pub left: Formula,
    pub right: Formula,
    pub strict: bool,
}

/// Splits `exists x1..xm. (delta(x1..xm) /\ body)`.
fn split(f: &Formula, ctx: &ArithContext) -> Result<(Vec<Var>, Formula), ArithError> {
    let mut vars = Vec::new();
    let mut cur = f;
    for _ in 0..ctx.dim() {
        match cur {
            Formula::Exists(v, b) => {
                vars.push(v.clone());
                cur = b;
            }
            _ => return Err(ArithError::Shape(format!("`{f}` is not a relativized existential"))),
        }
    }
    match cur {
        Formula::And(d, body) if **d == ctx.numbers.delta_on(&vars) => Ok((vars, (**body).clone())),
        _ => Err(ArithError::Shape(format!("`{f}` does not start with the number domain"))),
    }
}

fn fresh_block(base: &Var, m: usize, avoid: &mut BTreeSet<Var>) -> Vec<Var> {
    (0..m)
        .map(|_| {
            let v = fresh_var(base, avoid);
            avoid.insert(v.clone());
            v
        })
        .collect()
}

fn rename_block(f: &Formula, from: &[Var], to: &[Var]) -> Formula {
    let map = from.iter().cloned().zip(to.iter().map(Term::var)).collect();
    crate::fol::substitute_many(f, &map)
}

impl WitnessComparison {
    /// The swapped comparison with strictness flipped.
    pub fn dual(&self) -> WitnessComparison {
        WitnessComparison { left: self.right.clone(), right: self.left.clone(), strict: !self.strict }
    }

    /// `exists x in delta. (A0(x) /\ forall y. (y <N x -> ~B0(y)))`, with `<=N`
    /// in place of `<N` when strict.
    pub fn formula(&self, ctx: &ArithContext) -> Result<Formula, ArithError> {
        let (xs, a0) = split(&self.left, ctx)?;
        let (ys, b0) = split(&self.right, ctx)?;
        let b_outer: BTreeSet<Var> = b0.free_vars().into_iter().filter(|v| !ys.contains(v)).collect();
        let mut avoid = a0.all_vars();
        avoid.extend(b_outer.iter().cloned());
        // the left block must not capture free variables of the right body
        let (xs, a0) = if xs.iter().any(|v| b_outer.contains(v)) {
            let xs2 = fresh_block(&xs[0], xs.len(), &mut avoid);
            let a0 = rename_block(&a0, &xs, &xs2);
            (xs2, a0)
        } else {
            (xs, a0)
        };
        avoid.extend(xs.iter().cloned());
        let ys2 = fresh_block(&ys[0], ys.len(), &mut avoid);
        let b0 = rename_block(&b0, &ys, &ys2);
        let order = if self.strict { "Le" } else { "Lt" };
        let args: Vec<Var> = ys2.iter().chain(&xs).cloned().collect();
        let bound = ctx.numbers.pred_on(order, &args).expect("number language has orders");
        let guard = Formula::forall_many(&ys2, Formula::implies(bound, Formula::not(b0)));
        Ok(Formula::exists_many(&xs, Formula::and(ctx.numbers.delta_on(&xs), Formula::and(a0, guard))))
    }
}

pub fn witness_compare(a: &Formula, b: &Formula, strict: bool, ctx: &ArithContext) -> Result<WitnessComparison, ArithError> {
    split(a, ctx)?;
    split(b, ctx)?;
    Ok(WitnessComparison { left: a.clone(), right: b.clone(), strict })
}

/// `max(rho0(sub), rho0(prov)) + 3`.
pub fn c11(ctx: &ArithContext) -> u32 {
    ctx.sub_rho0.max(ctx.prov_rho0) + 3
}

pub fn threshold_values(rho_a: u32, rho_b: u32, rho_scheme: u32, c11: u32) -> u32 {
    rho_a.max(rho_b + c11).max(rho_scheme + c11)
}

/// The least admissible level for theory sentence `a` and target `b`.
pub fn threshold(ctx: &ArithContext, a: &Formula, b: &Formula) -> u32 {
    threshold_values(ctx.profile(a).rho0, ctx.profile(b).rho0, ctx.scheme_rho0, c11(ctx))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BudgetReport {
    pub level: u32,
    pub threshold: u32,
    pub rho0: u32,
    /// `max(rho0(sub), rho0(prov)) + max(rho0(scheme), rho0(B0)) + 3`.
    pub estimate: u32,
}

#[derive(Clone, Debug)]
pub struct RosserSentence {
    pub sentence: Formula,
    /// The formula before its free block is replaced by the numeral of its own code.
    pub pre_diagonal: Formula,
    pub diagonal_block: Vec<Var>,
    pub diagonal_code: GodelCode,
    pub report: BudgetReport,
}

/// Builds `R = exists x. (delta(x) /\ B0(x) /\ exists z. (delta(z) /\ sub(l,l,z)
/// /\ forall y. (y <N x -> ~prov(y,z))))` with `l` the numeral of the code of
/// the pre-diagonal formula, and checks `rho0(R) <= n`. Large codes make `R`
/// deep; call inside [`super::deep_stack`].
pub fn rosser_sentence(a: &Formula, b0: &Formula, n: u32, ctx: &ArithContext) -> Result<RosserSentence, ArithError> {
    let m = ctx.dim();
    let free: Vec<Var> = b0.free_vars().into_iter().collect();
    if free.len() != m {
        return Err(ArithError::FreeBlock { expected: m, found: free.len() });
    }
    let b = Formula::exists_many(&free, Formula::and(ctx.numbers.delta_on(&free), b0.clone()));
    let threshold = threshold(ctx, a, &b);
    if n < threshold {
        return Err(ArithError::BelowThreshold { n, threshold });
    }
    let mut avoid = b0.all_vars();
    let xs = fresh_block(&Var::new("x", 0), m, &mut avoid);
    let zs = fresh_block(&Var::new("z", 0), m, &mut avoid);
    let ys = fresh_block(&Var::new("y", 0), m, &mut avoid);
    let lvar = (0..)
        .map(|i| Var::new("l", i))
        .find(|c| block(c, m).iter().all(|v| !avoid.contains(v)))
        .expect("fresh block exists");
    let ls = block(&lvar, m);
    let b0x = rename_block(b0, &free, &xs);
    let nums = &ctx.numbers;
    let cat = |parts: &[&[Var]]| parts.concat();
    let sub = nums.pred_on(SUB, &cat(&[&ls, &ls, &zs])).expect("sub");
    let lt = nums.pred_on("Lt", &cat(&[&ys, &xs])).expect("order");
    let prov = nums.pred_on(PROV, &cat(&[&ys, &zs])).expect("prov");
    let inner = Formula::exists_many(
        &zs,
        Formula::conj([nums.delta_on(&zs), sub, Formula::forall_many(&ys, Formula::implies(lt, Formula::not(prov)))]),
    );
    let pre_diagonal = Formula::exists_many(&xs, Formula::conj([nums.delta_on(&xs), b0x, inner]));
    let diagonal_code = godel_encode(&pre_diagonal);
    let sentence = substitute_numeral(&pre_diagonal, &ls, &diagonal_code.0, ctx);
    let rho0 = ctx.profile(&sentence).rho0;
    let estimate = ctx.sub_rho0.max(ctx.prov_rho0) + ctx.scheme_rho0.max(ctx.profile(b0).rho0) + 3;
    if rho0 > n {
        return Err(ArithError::BudgetViolation { rho0, budget: n });
    }
    Ok(RosserSentence {
        sentence,
        pre_diagonal,
        diagonal_block: ls,
        diagonal_code,
        report: BudgetReport { level: n, threshold, rho0, estimate },
    })
}

/// The function the substitution predicate denotes: the code of the first
/// formula with its free block replaced by the numeral of the second code.
/// Closed formulas come back unchanged.
pub fn sub_oracle(code: &GodelCode, arg: &GodelCode, ctx: &ArithContext) -> Result<GodelCode, ArithError> {
    let f = godel_decode(code)?;
    let free: Vec<Var> = f.free_vars().into_iter().collect();
    if free.is_empty() {
        return Ok(code.clone());
    }
    if free.len() != ctx.dim() {
        return Err(ArithError::FreeBlock { expected: ctx.dim(), found: free.len() });
    }
    Ok(godel_encode(&substitute_numeral(&f, &free, &arg.0, ctx)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::deep_stack;
    use crate::fol::parse_lenient;

    fn rel(text: &str) -> Formula {
        parse_lenient(text).unwrap()
    }

    #[test]
    fn comparison_matches_template() {
        let ctx = ArithContext::standard();
        let a = rel("exists x. (N(x) /\\ P(x))");
        let b = rel("exists y. (N(y) /\\ Q(y))");
        let w = witness_compare(&a, &b, false, &ctx).unwrap();
        assert_eq!(
            w.formula(&ctx).unwrap().to_string(),
            "exists x. (N(x) /\\ (P(x) /\\ forall y. ((N(y) /\\ (N(x) /\\ Lt(y,x))) -> ~Q(y))))"
        );
        let d = w.dual();
        assert_eq!((d.left.clone(), d.strict), (b.clone(), true));
        assert_eq!(
            d.formula(&ctx).unwrap().to_string(),
            "exists y. (N(y) /\\ (Q(y) /\\ forall x. ((N(x) /\\ (N(y) /\\ Le(x,y))) -> ~P(x))))"
        );
        assert_eq!(d.dual(), w);
    }

    #[test]
    fn comparison_keeps_outer_variables_free() {
        let ctx = ArithContext::standard();
        let a = rel("exists y. (N(y) /\\ Q(y))");
        let b = rel("exists x. (N(x) /\\ R(x,y))");
        for strict in [false, true] {
            let f = witness_compare(&a, &b, strict, &ctx).unwrap().formula(&ctx).unwrap();
            assert_eq!(f.free_vars(), [Var::new("y", 0)].into());
        }
    }

    #[test]
    fn comparison_renames_clashing_witness() {
        let ctx = ArithContext::standard();
        let a = rel("exists x. (N(x) /\\ P(x))");
        let w = witness_compare(&a, &a, false, &ctx).unwrap();
        assert_eq!(
            w.formula(&ctx).unwrap().to_string(),
            "exists x. (N(x) /\\ (P(x) /\\ forall x_1. ((N(x_1) /\\ (N(x) /\\ Lt(x_1,x))) -> ~P(x_1))))"
        );
        assert!(matches!(witness_compare(&rel("P(x)"), &a, false, &ctx), Err(ArithError::Shape(_))));
    }

    #[test]
    fn threshold_arithmetic() {
        assert_eq!(threshold_values(9, 2, 3, 5), 9);
        assert_eq!(threshold_values(1, 1, 1, 7), 8);
        let ctx = ArithContext::standard();
        assert_eq!(c11(&ctx), 7);
    }

    #[test]
    fn rosser_is_its_own_diagonal() {
        deep_stack(|| {
            let ctx = ArithContext::standard();
            let b0 = rel("P(u)");
            let r = rosser_sentence(&rel("top"), &b0, 9, &ctx).unwrap();
            assert!(r.sentence.is_sentence());
            assert!(r.report.rho0 <= r.report.estimate);
            let code = &r.diagonal_code;
            assert_eq!(sub_oracle(code, code, &ctx).unwrap(), godel_encode(&r.sentence));
            assert!(matches!(rosser_sentence(&rel("top"), &b0, 8, &ctx), Err(ArithError::BelowThreshold { .. })));
        });
    }

    #[test]
    fn oracle_on_closed_formula_is_identity() {
        let ctx = ArithContext::standard();
        let c = godel_encode(&rel("forall x. P(x)"));
        assert_eq!(sub_oracle(&c, &c, &ctx).unwrap(), c);
    }
}
