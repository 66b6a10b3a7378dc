use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use malachite_nz::natural::Natural;

use super::{plug, SatFamily, SatMode, Satgen, SatgenError};
use crate::arith::numeral_source;
use crate::complexity::{profile, ComplexityProfile};
use crate::fol::{substitute, Formula, Signature, Term, Var};
use crate::translations::{Translation, TranslationSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CutKind {
    /// Complementary positive and negative satisfaction on shallow Delta formulas.
    Jdag,
    /// The nested substitution-invariance family, starting from `N`.
    Jcirc,
    /// Substitution invariance on shallow Delta formulas.
    Jstar,
    /// `Jstar /\ Jdag`.
    Jddag,
    /// Proof lengths for which proofs are sound.
    Y,
    /// The shortened, parameter-free intersection of `Jddag` and `Y`.
    Im,
    Custom,
}

impl fmt::Display for CutKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CutKind::Jdag => "Jdag",
            CutKind::Jcirc => "Jcirc",
            CutKind::Jstar => "Jstar",
            CutKind::Jddag => "Jddag",
            CutKind::Y => "Y",
            CutKind::Im => "Im",
            CutKind::Custom => "custom",
        })
    }
}

impl std::str::FromStr for CutKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "Jdag" | "jdag" => CutKind::Jdag,
            "Jcirc" | "jcirc" => CutKind::Jcirc,
            "Jstar" | "jstar" => CutKind::Jstar,
            "Jddag" | "jddag" => CutKind::Jddag,
            "Y" | "y" => CutKind::Y,
            "Im" | "im" => CutKind::Im,
            _ => return Err(format!("unknown cut kind `{s}`")),
        })
    }
}

/// Closure steps for [`Satgen::shorten_cut`], applied in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Closure {
    Plus,
    Times,
    Omega1,
    Down,
}

/// A virtual class: a formula in one variable plus parameters.
#[derive(Clone, Debug)]
pub struct CutFormula {
    pub kind: CutKind,
    pub n: u32,
    pub var: Var,
    pub params: Vec<Var>,
    pub formula: Formula,
    pub profile: ComplexityProfile,
}

impl CutFormula {
    /// Wraps `formula`, whose free variables must be `var` and `params`.
    pub fn custom(formula: Formula, var: Var, params: Vec<Var>) -> Result<CutFormula, SatgenError> {
        CutFormula::build(CutKind::Custom, 0, formula, var, params)
    }

    fn build(kind: CutKind, n: u32, formula: Formula, var: Var, params: Vec<Var>) -> Result<CutFormula, SatgenError> {
        let mut allowed: BTreeSet<Var> = params.iter().cloned().collect();
        allowed.insert(var.clone());
        let free = formula.free_vars();
        if !free.is_subset(&allowed) || !free.contains(&var) {
            return Err(SatgenError::CutShape(free.iter().map(|v| v.to_string()).collect()));
        }
        let profile = profile(&formula);
        Ok(CutFormula { kind, n, var, params, formula, profile })
    }

    /// The defining formula at `v`.
    pub fn at(&self, v: &Var) -> Formula {
        substitute(&self.formula, &self.var, &Term::var(v))
    }

    /// Whether `inner` occurs in this formula, either in place or as a
    /// shared reference at [`cut_ref_var`].
    pub fn contains_cut(&self, inner: &CutFormula) -> bool {
        self.formula.contains_subformula(&inner.formula) || self.formula.contains_subformula(&inner.at(&cut_ref_var()))
    }
}

/// `A0 /\ forall x. (Im_n(x) -> B(x))` together with the chosen level.
#[derive(Clone, Debug)]
pub struct ConservativeExtension {
    pub level: u32,
    pub sentence: Formula,
    pub cut: CutFormula,
}

/// `max(rho0(A0), rho0(B) + c11, m + c11, rho0(scheme) + c11)`.
pub fn conservative_level(rho_a0: u32, rho_b: u32, m: u32, rho_scheme: u32, c11: u32) -> u32 {
    rho_a0.max(rho_b + c11).max(m + c11).max(rho_scheme + c11)
}

fn x() -> Var {
    Var::new("x", 0)
}

/// Formulas up to this many symbols are substituted into place; larger ones
/// are referenced through [`reference`] so every occurrence shares one copy.
const INLINE_LIMIT: usize = 64;

/// Binder of shared cut references.
pub fn cut_ref_var() -> Var {
    Var::new("cv", 0)
}

/// Binders of shared satisfaction references.
fn sat_ref_vars() -> [Var; 3] {
    [Var::new("si", 0), Var::new("sb", 0), Var::new("sa", 0)]
}

/// `body` (free in `formals`) at `args`. Small bodies are substituted;
/// large ones become `exists formals. (formals = args /\ body)` so the same
/// `Arc` serves every occurrence.
fn reference(body: &Arc<Formula>, formals: &[Var], args: &[Var]) -> Formula {
    if formals == args {
        return (**body).clone();
    }
    if body.symbol_count() <= INLINE_LIMIT {
        return plug(body, formals, args);
    }
    let eqs = formals.iter().zip(args).map(|(f, a)| Formula::eq_vars(f, a));
    let guard = Formula::conj(eqs);
    Formula::exists_many(formals, Formula::And(Arc::new(guard), body.clone()))
}

/// A cut prepared for repeated reference: its formula at [`cut_ref_var`].
struct SharedCut {
    body: Arc<Formula>,
}

impl SharedCut {
    fn new(cut: &CutFormula) -> SharedCut {
        SharedCut { body: Arc::new(cut.at(&cut_ref_var())) }
    }

    fn at(&self, v: &Var) -> Formula {
        reference(&self.body, &[cut_ref_var()], std::slice::from_ref(v))
    }
}

/// Builds cut families, generating each satisfaction level once.
struct CutBuilder<'a> {
    gen: &'a Satgen,
    sats: BTreeMap<u32, Arc<Formula>>,
}

impl<'a> CutBuilder<'a> {
    fn new(gen: &'a Satgen) -> Self {
        CutBuilder { gen, sats: BTreeMap::new() }
    }

    /// `sat_level` at the reference binders.
    fn sat(&mut self, level: u32) -> Result<Arc<Formula>, SatgenError> {
        if let Some(s) = self.sats.get(&level) {
            return Ok(s.clone());
        }
        let sat = self.gen.sat_uncapped(level, SatMode::Optimized)?;
        let body = Arc::new(plug(&sat.formula, &SatFamily::designated(), &sat_ref_vars()));
        self.sats.insert(level, body.clone());
        Ok(body)
    }

    /// Expands template `name` at `x`. `Sat` refers to `sat_level`,
    /// `Level(k)` is the numeral of `level`, `Prev` and `Jddag` the given cuts.
    fn template(
        &mut self,
        name: &str,
        sat_level: u32,
        level: u32,
        prev: Option<&CutFormula>,
        jddag: Option<&SharedCut>,
    ) -> Result<Formula, SatgenError> {
        let sat = self.sat(sat_level)?;
        let formals = sat_ref_vars();
        let level = Natural::from(level);
        let resolve = |p: &str, args: &[Var]| -> Option<Formula> {
            match (p, args.len()) {
                ("Sat", 3) => Some(reference(&sat, &formals, args)),
                ("Level", 1) => Some(numeral_source(&level, &args[0])),
                ("Prev", 1) => prev.map(|c| c.at(&args[0])),
                ("Jddag", 1) => jddag.map(|c| c.at(&args[0])),
                _ => None,
            }
        };
        self.gen.templates.instantiate(name, &[x()], &resolve)
    }

    fn cut(&mut self, kind: CutKind, n: u32) -> Result<CutFormula, SatgenError> {
        let need = |min: u32| {
            if n < min {
                Err(SatgenError::LevelTooLow { kind: kind.to_string(), n, min })
            } else {
                Ok(())
            }
        };
        match kind {
            CutKind::Jdag | CutKind::Jstar => {
                need(1)?;
                let name = if kind == CutKind::Jdag { "jdag" } else { "jstar" };
                let f = self.template(name, n, n, None, None)?;
                finish(kind, n, f)
            }
            CutKind::Jcirc => {
                let mut cur = finish(kind, 0, Formula::atom_vars("N", [&x()]))?;
                for level in 1..=n {
                    let f = self.template("jcirc", level, level, Some(&cur), None)?;
                    cur = finish(kind, level, f)?;
                }
                Ok(cur)
            }
            CutKind::Jddag => {
                need(1)?;
                let star = self.cut(CutKind::Jstar, n)?;
                let dag = self.cut(CutKind::Jdag, n)?;
                finish(kind, n, Formula::and(star.formula, dag.formula))
            }
            CutKind::Y => {
                let jddag = SharedCut::new(&self.cut(CutKind::Jddag, n + 1)?);
                let f = self.template("ycut", n, n + 1, None, Some(&jddag))?;
                finish(kind, n, f)
            }
            CutKind::Im => {
                let jddag = self.cut(CutKind::Jddag, n + 1)?;
                let y = self.cut(CutKind::Y, n)?;
                let base = finish(CutKind::Custom, n, Formula::and(jddag.formula, y.formula))?;
                let all = [Closure::Plus, Closure::Times, Closure::Omega1, Closure::Down];
                let short = self.gen.shorten_cut(&base, &all)?;
                let free = self.gen.parameter_free(&short)?;
                Ok(CutFormula { kind, n, ..free })
            }
            CutKind::Custom => Err(SatgenError::UnknownName("custom cuts are built with CutFormula::custom".into())),
        }
    }
}

fn finish(kind: CutKind, n: u32, formula: Formula) -> Result<CutFormula, SatgenError> {
    let params = formula.free_vars().into_iter().filter(|v| *v != x()).collect();
    CutFormula::build(kind, n, formula, x(), params)
}

impl Satgen {
    /// The defining formula of a cut family member, built over the optimized
    /// satisfaction family. `Jdag`, `Jstar`, `Jddag` need `n >= 1`; `Y` and
    /// `Im` at `n` use level `n + 1` for their intersection cut.
    pub fn gen_cut(&self, kind: CutKind, n: u32) -> Result<CutFormula, SatgenError> {
        self.check_cap(n)?;
        CutBuilder::new(self).cut(kind, n)
    }

    /// Applies the closure steps in their fixed order (`Plus`, `Times`,
    /// `Omega1`, `Down`), each keeping the previous cut as a conjunct.
    pub fn shorten_cut(&self, cut: &CutFormula, closures: &[Closure]) -> Result<CutFormula, SatgenError> {
        let mut steps: Vec<Closure> = closures.to_vec();
        steps.sort();
        steps.dedup();
        let mut cur = cut.clone();
        for step in steps {
            let name = match step {
                Closure::Plus => "plus",
                Closure::Times => "times",
                Closure::Omega1 => "omega1",
                Closure::Down => "down",
            };
            let shared = SharedCut::new(&cur);
            let resolve = |p: &str, args: &[Var]| (p == "Cut" && args.len() == 1).then(|| shared.at(&args[0]));
            let f = self.templates.instantiate(name, std::slice::from_ref(&cur.var), &resolve)?;
            cur = CutFormula::build(cut.kind, cut.n, f, cur.var.clone(), cur.params.clone())?;
        }
        Ok(cur)
    }

    /// `forall params. (cut({z | I(z, params)}) -> I(x, params))`; a cut
    /// without parameters comes back unchanged.
    pub fn parameter_free(&self, cut: &CutFormula) -> Result<CutFormula, SatgenError> {
        if cut.params.is_empty() {
            return Ok(cut.clone());
        }
        let shared = SharedCut::new(cut);
        let resolve = |p: &str, args: &[Var]| (p == "Cut" && args.len() == 1).then(|| shared.at(&args[0]));
        let body = self.templates.instantiate("istar", std::slice::from_ref(&cut.var), &resolve)?;
        CutFormula::build(cut.kind, cut.n, Formula::forall_many(&cut.params, body), cut.var.clone(), Vec::new())
    }

    /// Extends a one-dimensional scheme for the frame to the object
    /// signature: object predicates and their atom-code relations translate
    /// to themselves under the domain guard.
    pub fn lift_scheme(&self, scheme: &Translation) -> Result<Translation, SatgenError> {
        if scheme.dim() != 1 {
            return Err(SatgenError::SchemeDimension(scheme.dim()));
        }
        let mut target = scheme.target.clone();
        let mut preds: Vec<(String, usize)> = Vec::new();
        for (p, k) in self.signature.preds() {
            if scheme.source.pred_arity(p).is_none() {
                preds.push((p.to_string(), k));
            }
        }
        for (p, k) in &preds {
            if target.pred_arity(p).is_none() {
                target.add_pred(p, *k)?;
            }
        }
        let source = self.signature.clone();
        let mut spec = TranslationSpec::new(&format!("{}+{}", scheme.name, self.theta.name), source, target, 1, scheme.delta().clone());
        for (p, img) in scheme.pred_images() {
            spec.preds.insert(p.to_string(), img.clone());
        }
        for (p, k) in &preds {
            let args: Vec<Var> = (0..*k).map(crate::translations::slot).collect();
            let guard = args.iter().map(|v| scheme.delta_on(std::slice::from_ref(v)));
            spec.preds.insert(p.clone(), Formula::conj(guard.chain([Formula::atom_vars(p, &args)])));
        }
        if !scheme.identity_is_componentwise() {
            spec.identity = Some(scheme.identity_formula());
        }
        spec.params = scheme.params().to_vec();
        spec.param_domain = Some(scheme.param_domain().clone());
        spec.param_eq = Some(scheme.param_eq().clone());
        spec.eq_vars = Some(scheme.eq_vars().to_vec());
        Ok(Translation::from_guarded(spec)?)
    }

    /// `Im_n` pushed through the lifted scheme; without a scheme, the cut of
    /// the frame itself.
    pub fn gen_im(&self, n: u32, scheme: Option<&Translation>) -> Result<CutFormula, SatgenError> {
        self.check_cap(n)?;
        let im = CutBuilder::new(self).cut(CutKind::Im, n)?;
        let Some(scheme) = scheme else { return Ok(im) };
        let lifted = self.lift_scheme(scheme)?;
        let f = lifted.apply(&im.formula, None)?;
        let params = f.free_vars().into_iter().filter(|v| *v != im.var).collect();
        CutFormula::build(CutKind::Im, n, f, im.var.clone(), params)
    }

    /// `A0 /\ forall x. (Im_n(x) -> B(x))` at the level
    /// `max(rho0(A0), rho0(B) + c11, m + c11, rho*(scheme) + c11)`.
    pub fn conservative_extension(
        &self,
        a0: &Formula,
        b: &Formula,
        m: u32,
        scheme: &Translation,
        c11: u32,
    ) -> Result<ConservativeExtension, SatgenError> {
        if !a0.is_sentence() {
            return Err(SatgenError::CutShape(a0.free_vars().iter().map(|v| v.to_string()).collect()));
        }
        let b_free: Vec<Var> = b.free_vars().into_iter().collect();
        let b_var = match b_free.as_slice() {
            [v] => Some(v.clone()),
            [] => None,
            _ => return Err(SatgenError::CutShape(b_free.iter().map(|v| v.to_string()).collect())),
        };
        let level = conservative_level(profile(a0).rho0, profile(b).rho0, m, scheme.rho_star(), c11);
        let cut = self.gen_im(level, Some(scheme))?;
        let xv = fresh_for(&cut.var, a0);
        let body_b = match &b_var {
            Some(v) => substitute(b, v, &Term::var(&xv)),
            None => b.clone(),
        };
        let sentence = Formula::and(a0.clone(), Formula::forall(xv.clone(), Formula::implies(cut.at(&xv), body_b)));
        Ok(ConservativeExtension { level, sentence, cut })
    }
}

fn fresh_for(base: &Var, f: &Formula) -> Var {
    crate::fol::fresh_var(base, &f.free_vars())
}

/// Object-signature convenience wrapper around [`Satgen::gen_cut`].
pub fn gen_cut(kind: CutKind, n: u32, theta: &Signature) -> Result<CutFormula, SatgenError> {
    Satgen::new(theta)?.gen_cut(kind, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::satgen::xstar;
    use crate::fol::parse_lenient;
    use crate::models::{eval, FiniteModel};
    use crate::translations::make_identity;

    fn gen() -> Satgen {
        Satgen::new(&Signature::with_preds("T", &[("P", 1)]).unwrap()).unwrap()
    }

    #[test]
    fn jcirc_zero_is_numbers() {
        let c = gen().gen_cut(CutKind::Jcirc, 0).unwrap();
        assert_eq!(c.formula.to_string(), "N(x)");
        assert!(c.params.is_empty());
    }

    #[test]
    fn jcirc_nests() {
        let g = gen();
        let prev = g.gen_cut(CutKind::Jcirc, 1).unwrap();
        let next = g.gen_cut(CutKind::Jcirc, 2).unwrap();
        assert!(next.formula.contains_subformula(&prev.formula));
    }

    #[test]
    fn cut_shapes() {
        let g = gen();
        for kind in [CutKind::Jdag, CutKind::Jstar, CutKind::Jddag, CutKind::Y] {
            let c = g.gen_cut(kind, 1).unwrap();
            assert_eq!(c.var, x());
            assert_eq!(c.params, vec![xstar()], "{kind}");
        }
        assert!(matches!(g.gen_cut(CutKind::Jstar, 0), Err(SatgenError::LevelTooLow { .. })));
        let star = g.gen_cut(CutKind::Jstar, 2).unwrap();
        let preds = star.formula.predicates();
        for p in ["Nu", "SigmaStar", "PiStar", "Subst", "FreeVar"] {
            assert!(preds.contains_key(p), "{p}");
        }
    }

    #[test]
    fn plus_shortening_shape() {
        let g = gen();
        let succ = CutFormula::custom(parse_lenient("J(x)").unwrap(), x(), vec![]).unwrap();
        let s = g.shorten_cut(&succ, &[Closure::Plus]).unwrap();
        assert_eq!(s.formula.to_string(), "(J(x) /\\ forall y. (J(y) -> forall z. (A(y,x,z) -> J(z))))");
        let all = g.shorten_cut(&succ, &[Closure::Down, Closure::Omega1, Closure::Plus, Closure::Times]).unwrap();
        assert!(all.contains_cut(&s));
        assert!(all.contains_cut(&succ));
    }

    #[test]
    fn parameter_free_shape() {
        let g = gen();
        let p = Var::new("p", 0);
        let cut = CutFormula::custom(parse_lenient("Le(x,p)").unwrap(), x(), vec![p]).unwrap();
        let star = g.parameter_free(&cut).unwrap();
        assert_eq!(
            star.formula.to_string(),
            "forall p. (((forall z. (Z(z) -> Le(z,p))) /\\ ((forall z. forall w. ((Le(z,p) /\\ S(z,w)) -> Le(w,p))) /\\ forall z. forall w. ((Le(z,p) /\\ Le(w,z)) -> Le(w,p)))) -> Le(x,p))"
        );
        assert!(star.params.is_empty());
    }

    #[test]
    fn im_has_one_free_variable() {
        let g = gen();
        let im = g.gen_cut(CutKind::Im, 1).unwrap();
        assert_eq!(im.formula.free_vars().into_iter().collect::<Vec<_>>(), vec![x()]);
        assert!(im.params.is_empty());
    }

    #[test]
    fn conservative_level_arithmetic() {
        assert_eq!(conservative_level(9, 2, 3, 5, 7), 12);
        assert_eq!(conservative_level(9, 0, 0, 0, 7), 9);
        assert_eq!(conservative_level(1, 1, 1, 1, 7), 8);
    }

    #[test]
    fn trivial_conservative_conjunct_holds() {
        let g = gen();
        let scheme = make_identity(&crate::satgen::frame_signature());
        let a0 = parse_lenient("exists y. forall x. ~In(x,y)").unwrap();
        let ext = g.conservative_extension(&a0, &Formula::Top, 0, &scheme, 7).unwrap();
        assert_eq!(ext.level, 8);
        let Formula::And(left, right) = &ext.sentence else { panic!("not a conjunction") };
        assert_eq!(**left, a0);
        assert!(matches!(&**right, Formula::Forall(_, body) if matches!(&**body, Formula::Implies(_, c) if **c == Formula::Top)));
        let mut m = FiniteModel::with_size(2);
        m.add_pred("In", 2).unwrap();
        assert!(eval(&m, &right.simplify_constants(), &Default::default()).unwrap());
    }

    #[test]
    fn shortening_adds_constant_rho0() {
        let g = gen();
        let all = [Closure::Plus, Closure::Times, Closure::Omega1, Closure::Down];
        let overheads: Vec<i64> = (1..=3)
            .map(|n| {
                let j = g.gen_cut(CutKind::Jdag, n).unwrap();
                let s = g.shorten_cut(&j, &all).unwrap();
                assert!(s.contains_cut(&j));
                i64::from(s.profile.rho0) - i64::from(j.profile.rho0)
            })
            .collect();
        assert!(overheads.windows(2).all(|w| w[0] == w[1]), "{overheads:?}");
    }

    #[test]
    fn relativized_im_respects_scheme_bound() {
        let g = gen();
        let frame = crate::satgen::frame_signature();
        let v0 = crate::translations::slot(0);
        let mut spec = TranslationSpec::new("numbers", frame.clone(), frame.clone(), 1, Formula::atom_vars("N", [&v0]));
        for (p, k) in frame.preds() {
            spec.preds.insert(p.to_string(), Formula::atom_vars(p, &crate::translations::slots(0..k)));
        }
        let scheme = Translation::new(spec).unwrap();
        let plain = g.gen_im(1, None).unwrap();
        let lifted = g.gen_im(1, Some(&scheme)).unwrap();
        assert_eq!(lifted.formula.free_vars().len(), 1);
        let bound = scheme.rho_star();
        assert!(lifted.profile.rho_e <= plain.profile.rho_e + bound);
        assert!(lifted.profile.rho_a <= plain.profile.rho_a + bound);
        assert!(g.lift_scheme(&make_identity(&Signature::with_preds("S", &[("R", 1)]).unwrap())).is_err());
    }
}
