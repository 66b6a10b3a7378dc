//! Multi-dimensional relative translations with optional parameters.
//!
//! Formulas inside a translation use the designated variables `v_0, v_1, ...`:
//! the domain formula has `v_0..v_{m-1}` free, the image of a `k`-ary predicate
//! has `v_0..v_{k*m-1}` free (argument `i` occupies `v_{i*m}..v_{i*m+m-1}`), and
//! the translated identity has `v_0..v_{2m-1}` free. Parameters are extra free
//! variables whose names are kept apart from every other variable.

mod file;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::complexity::profile;
use crate::fol::shared::SharedMemo;
use crate::fol::{alpha_eq, substitute_many, Formula, Renaming, Signature, Term, Var};

pub use file::{parse_translations, TranslationFileError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TranslationError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("no image given for source predicate `{0}`")]
    MissingPredicate(String),
    #[error("image given for `{0}`, which is not a source predicate")]
    ExtraPredicate(String),
    #[error("{context}: predicate `{symbol}` is not in the target signature at arity {arity}")]
    TargetSymbol { context: String, symbol: String, arity: usize },
    #[error("{context}: unexpected free variable `{var}`")]
    StrayFreeVariable { context: String, var: Var },
    #[error("parameter name `{0}` is reserved or repeated")]
    BadParameter(String),
    #[error("source signature must be relational")]
    SourceNotRelational,
    #[error("formula uses function symbols; eliminate terms first")]
    NotRelational,
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("case formula must be a sentence, found free `{0}`")]
    NotSentence(Var),
    #[error("parameter block has {got} variables, translation has {expected} parameters")]
    ParameterCount { expected: usize, got: usize },
    #[error("formula uses source predicate `{0}` at the wrong arity")]
    SourceArity(String),
}

/// The raw ingredients of a translation, before guarding and validation.
#[derive(Clone, Debug)]
pub struct TranslationSpec {
    pub name: String,
    pub source: Signature,
    pub target: Signature,
    pub dim: usize,
    pub delta: Formula,
    /// Unguarded images; the domain formula is conjoined onto each argument block.
    pub preds: BTreeMap<String, Formula>,
    /// `None` translates identity componentwise.
    pub identity: Option<Formula>,
    pub params: Vec<Var>,
    pub param_domain: Option<Formula>,
    pub param_eq: Option<Formula>,
    /// Second copy of the parameters used by `param_eq`; defaults to `<name>z`.
    pub eq_vars: Option<Vec<Var>>,
}

impl TranslationSpec {
    pub fn new(name: &str, source: Signature, target: Signature, dim: usize, delta: Formula) -> TranslationSpec {
        TranslationSpec {
            name: name.to_string(),
            source,
            target,
            dim,
            delta,
            preds: BTreeMap::new(),
            identity: None,
            params: Vec::new(),
            param_domain: None,
            param_eq: None,
            eq_vars: None,
        }
    }

    pub fn pred(mut self, p: &str, image: Formula) -> TranslationSpec {
        self.preds.insert(p.to_string(), image);
        self
    }

    pub fn identity(mut self, image: Formula) -> TranslationSpec {
        self.identity = Some(image);
        self
    }

    pub fn params(mut self, params: Vec<Var>, domain: Option<Formula>) -> TranslationSpec {
        self.params = params;
        self.param_domain = domain;
        self
    }
}

#[derive(Clone, Debug)]
pub struct Translation {
    pub name: String,
    pub source: Signature,
    pub target: Signature,
    dim: usize,
    delta: Formula,
    pred_map: BTreeMap<String, Formula>,
    identity: Option<Formula>,
    params: Vec<Var>,
    param_domain: Formula,
    param_eq: Formula,
    eq_vars: Vec<Var>,
}

/// An interpretation records theories around a translation; the obligation
/// that every source theorem translates to a target theorem is not checked.
#[derive(Clone, Debug)]
pub struct Interpretation {
    pub source_theory: (String, Vec<Formula>),
    pub target_theory: (String, Vec<Formula>),
    pub translation: Translation,
}

/// The designated variable `v_j`.
pub fn slot(j: usize) -> Var {
    Var::new("v", j as u32)
}

pub fn slots(range: std::ops::Range<usize>) -> Vec<Var> {
    range.map(slot).collect()
}

/// The `m` target variables representing source variable `x`.
pub fn block(x: &Var, m: usize) -> Vec<Var> {
    (0..m).map(|k| x.with_index(x.index * m as u32 + k as u32)).collect()
}

fn instantiate(f: &Formula, pairs: impl IntoIterator<Item = (Var, Var)>) -> Formula {
    let map: BTreeMap<Var, Term> = pairs.into_iter().map(|(a, b)| (a, Term::Var(b))).collect();
    substitute_many(f, &map)
}

fn is_trivial_domain(delta: &Formula) -> bool {
    match delta {
        Formula::Top => true,
        Formula::Equals(a, b) => a == b,
        Formula::And(a, b) => is_trivial_domain(a) && is_trivial_domain(b),
        _ => false,
    }
}

impl Translation {
    /// Validates a spec and stores every predicate image guarded by the domain
    /// formula on each argument block.
    pub fn new(spec: TranslationSpec) -> Result<Translation, TranslationError> {
        let m = spec.dim;
        if m == 0 {
            return Err(TranslationError::ZeroDimension);
        }
        let guard = |k: usize, body: Formula| -> Formula {
            if is_trivial_domain(&spec.delta) {
                return body;
            }
            let mut parts: Vec<Formula> =
                (0..k).map(|i| instantiate(&spec.delta, (0..m).map(|c| (slot(c), slot(i * m + c))))).collect();
            parts.push(body);
            Formula::conj(parts)
        };
        let mut pred_map = BTreeMap::new();
        for (p, body) in &spec.preds {
            let Some(k) = spec.source.pred_arity(p) else {
                return Err(TranslationError::ExtraPredicate(p.clone()));
            };
            pred_map.insert(p.clone(), guard(k, body.clone()));
        }
        let identity = spec.identity.clone().map(|f| guard(2, f));
        let eq_vars = spec.eq_vars.clone().unwrap_or_else(|| {
            spec.params.iter().map(|p| Var::new(format!("{}z", p.name), p.index)).collect()
        });
        let param_eq = spec.param_eq.clone().unwrap_or_else(|| {
            Formula::conj(spec.params.iter().zip(&eq_vars).map(|(a, b)| Formula::eq_vars(a, b)))
        });
        let t = Translation {
            name: spec.name,
            source: spec.source,
            target: spec.target,
            dim: m,
            delta: spec.delta,
            pred_map,
            identity,
            params: spec.params,
            param_domain: spec.param_domain.unwrap_or(Formula::Top),
            param_eq,
            eq_vars,
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<(), TranslationError> {
        if !self.source.is_relational() {
            return Err(TranslationError::SourceNotRelational);
        }
        let mut names = BTreeSet::new();
        for p in self.params.iter().chain(&self.eq_vars) {
            if &*p.name == "v" || !names.insert(p.clone()) {
                return Err(TranslationError::BadParameter(p.to_string()));
            }
        }
        let param_names: BTreeSet<&str> = self.params.iter().chain(&self.eq_vars).map(|p| &*p.name).collect();
        for (p, _) in self.source.preds() {
            if !self.pred_map.contains_key(p) {
                return Err(TranslationError::MissingPredicate(p.to_string()));
            }
        }
        let m = self.dim;
        let params: BTreeSet<Var> = self.params.iter().cloned().collect();
        let check = |context: String, f: &Formula, allowed: BTreeSet<Var>| -> Result<(), TranslationError> {
            for (sym, arity) in f.predicates() {
                if self.target.pred_arity(&sym) != Some(arity) {
                    return Err(TranslationError::TargetSymbol { context, symbol: sym, arity });
                }
            }
            if f.has_function_symbols() {
                return Err(TranslationError::NotRelational);
            }
            if let Some(var) = f.free_vars().into_iter().find(|v| !allowed.contains(v)) {
                return Err(TranslationError::StrayFreeVariable { context, var });
            }
            let mut bound_clash = None;
            f.visit(&mut |g| {
                if let Formula::Forall(v, _) | Formula::Exists(v, _) = g {
                    if param_names.contains(&*v.name) {
                        bound_clash = Some(v.clone());
                    }
                }
            });
            if let Some(v) = bound_clash {
                return Err(TranslationError::BadParameter(v.to_string()));
            }
            Ok(())
        };
        let with_slots = |n: usize| -> BTreeSet<Var> { slots(0..n).into_iter().chain(params.iter().cloned()).collect() };
        check("domain".into(), &self.delta, with_slots(m))?;
        for (p, f) in &self.pred_map {
            let k = self.source.pred_arity(p).unwrap_or(0);
            check(format!("image of {p}"), f, with_slots(k * m))?;
        }
        if let Some(id) = &self.identity {
            check("identity".into(), id, with_slots(2 * m))?;
        }
        check("parameter domain".into(), &self.param_domain, params.clone())?;
        let eq_allowed: BTreeSet<Var> = params.iter().chain(&self.eq_vars).cloned().collect();
        check("parameter equivalence".into(), &self.param_eq, eq_allowed)?;
        Ok(())
    }

    /// Stores already-guarded parts without re-guarding; used by the combinators.
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        name: String,
        source: Signature,
        target: Signature,
        dim: usize,
        delta: Formula,
        pred_map: BTreeMap<String, Formula>,
        identity: Option<Formula>,
        params: Vec<Var>,
        param_domain: Formula,
        param_eq: Formula,
        eq_vars: Vec<Var>,
    ) -> Result<Translation, TranslationError> {
        let t = Translation {
            name,
            source,
            target,
            dim,
            delta,
            pred_map,
            identity,
            params,
            param_domain,
            param_eq,
            eq_vars,
        };
        t.validate()?;
        Ok(t)
    }

    /// Builds from parts that are already guarded, as found in a file marked `guarded`.
    pub fn from_guarded(spec: TranslationSpec) -> Result<Translation, TranslationError> {
        let eq_vars = spec.eq_vars.clone().unwrap_or_else(|| {
            spec.params.iter().map(|p| Var::new(format!("{}z", p.name), p.index)).collect()
        });
        let param_eq = spec.param_eq.clone().unwrap_or_else(|| {
            Formula::conj(spec.params.iter().zip(&eq_vars).map(|(a, b)| Formula::eq_vars(a, b)))
        });
        if spec.dim == 0 {
            return Err(TranslationError::ZeroDimension);
        }
        for p in spec.preds.keys() {
            if spec.source.pred_arity(p).is_none() {
                return Err(TranslationError::ExtraPredicate(p.clone()));
            }
        }
        Translation::assemble(
            spec.name,
            spec.source,
            spec.target,
            spec.dim,
            spec.delta,
            spec.preds,
            spec.identity,
            spec.params,
            spec.param_domain.unwrap_or(Formula::Top),
            param_eq,
            eq_vars,
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn delta(&self) -> &Formula {
        &self.delta
    }

    pub fn pred_image(&self, p: &str) -> Option<&Formula> {
        self.pred_map.get(p)
    }

    pub fn pred_images(&self) -> impl Iterator<Item = (&str, &Formula)> {
        self.pred_map.iter().map(|(p, f)| (p.as_str(), f))
    }

    pub fn params(&self) -> &[Var] {
        &self.params
    }

    pub fn eq_vars(&self) -> &[Var] {
        &self.eq_vars
    }

    pub fn param_domain(&self) -> &Formula {
        &self.param_domain
    }

    pub fn param_eq(&self) -> &Formula {
        &self.param_eq
    }

    pub fn identity_is_componentwise(&self) -> bool {
        self.identity.is_none()
    }

    /// The translated identity over `v_0..v_{2m-1}`, explicit even when componentwise.
    pub fn identity_formula(&self) -> Formula {
        match &self.identity {
            Some(f) => f.clone(),
            None => Formula::conj((0..self.dim).map(|k| Formula::eq_vars(&slot(k), &slot(self.dim + k)))),
        }
    }

    /// The domain formula applied to the given block.
    pub fn delta_on(&self, xs: &[Var]) -> Formula {
        instantiate(&self.delta, slots(0..self.dim).into_iter().zip(xs.iter().cloned()))
    }

    /// The image of `p` applied to argument blocks laid out consecutively.
    pub fn pred_on(&self, p: &str, args: &[Var]) -> Option<Formula> {
        let f = self.pred_map.get(p)?;
        Some(instantiate(f, slots(0..args.len()).into_iter().zip(args.iter().cloned())))
    }

    pub fn identity_on(&self, xs: &[Var], ys: &[Var]) -> Formula {
        let args: Vec<Var> = xs.iter().chain(ys).cloned().collect();
        instantiate(&self.identity_formula(), slots(0..args.len()).into_iter().zip(args))
    }

    fn reserved_names(&self) -> BTreeSet<Arc<str>> {
        self.params.iter().chain(&self.eq_vars).map(|p| p.name.clone()).collect()
    }

    /// Translates a relational source formula. Quantifiers are relativized to
    /// the domain formula; each source variable becomes a block of `dim`
    /// variables. When `param_block` is given, parameters are renamed to it.
    pub fn apply(&self, a: &Formula, param_block: Option<&[Var]>) -> Result<Formula, TranslationError> {
        if a.has_function_symbols() {
            return Err(TranslationError::NotRelational);
        }
        let reserved = self.reserved_names();
        let names: BTreeSet<Arc<str>> = a.all_vars().into_iter().map(|v| v.name).collect();
        let clashing: BTreeSet<Arc<str>> = names.intersection(&reserved).cloned().collect();
        let taken: BTreeSet<Arc<str>> = names.union(&reserved).cloned().collect();
        let renaming = Renaming::new(&clashing, &taken);
        let a = renaming.apply(a);
        let out = self.translate(&a)?;
        match param_block {
            None => Ok(out),
            Some(block) => {
                if block.len() != self.params.len() {
                    return Err(TranslationError::ParameterCount { expected: self.params.len(), got: block.len() });
                }
                Ok(instantiate(&out, self.params.iter().cloned().zip(block.iter().cloned())))
            }
        }
    }

    fn translate(&self, a: &Formula) -> Result<Formula, TranslationError> {
        self.translate_with(a, &mut SharedMemo::new())
    }

    fn translate_with(
        &self,
        a: &Formula,
        memo: &mut SharedMemo<Result<Arc<Formula>, TranslationError>>,
    ) -> Result<Formula, TranslationError> {
        let m = self.dim;
        let mut sub = |b: &Arc<Formula>| memo.get_or(b, |memo| self.translate_with(b, memo).map(Arc::new));
        Ok(match a {
            Formula::Atom(p, args) => {
                if self.source.pred_arity(p) != Some(args.len()) {
                    return Err(TranslationError::SourceArity(p.to_string()));
                }
                let blocks: Vec<Var> =
                    args.iter().flat_map(|t| block(t.as_var().expect("relational"), m)).collect();
                self.pred_on(p, &blocks).ok_or_else(|| TranslationError::MissingPredicate(p.to_string()))?
            }
            Formula::Equals(s, t) => {
                let xs = block(s.as_var().expect("relational"), m);
                let ys = block(t.as_var().expect("relational"), m);
                self.identity_on(&xs, &ys)
            }
            Formula::Top | Formula::Bot => a.clone(),
            Formula::Not(b) => Formula::Not(sub(b)?),
            Formula::And(b, c) => Formula::And(sub(b)?, sub(c)?),
            Formula::Or(b, c) => Formula::Or(sub(b)?, sub(c)?),
            Formula::Implies(b, c) => Formula::Implies(sub(b)?, sub(c)?),
            Formula::Forall(x, b) => {
                let xs = block(x, m);
                Formula::forall_many(&xs, Formula::Implies(Arc::new(self.delta_on(&xs)), sub(b)?))
            }
            Formula::Exists(x, b) => {
                let xs = block(x, m);
                Formula::exists_many(&xs, Formula::And(Arc::new(self.delta_on(&xs)), sub(b)?))
            }
        })
    }

    /// Maximum `rho0` over the domain formula, the predicate images and the
    /// translated identity.
    pub fn rho_star(&self) -> u32 {
        let mut r = profile(&self.delta).rho0;
        for f in self.pred_map.values() {
            r = r.max(profile(f).rho0);
        }
        r.max(profile(&self.identity_formula()).rho0)
    }

    /// Renames parameters (and their equivalence copies) so that none uses a name in `avoid`.
    fn rename_params_away(&self, avoid: &BTreeSet<Arc<str>>) -> Translation {
        let own = self.reserved_names();
        let clashing: BTreeSet<Arc<str>> = own.intersection(avoid).cloned().collect();
        if clashing.is_empty() {
            return self.clone();
        }
        let mut taken: BTreeSet<Arc<str>> = avoid.union(&own).cloned().collect();
        taken.insert(Arc::from("v"));
        for f in std::iter::once(&self.delta).chain(self.pred_map.values()) {
            taken.extend(f.all_vars().into_iter().map(|v| v.name));
        }
        let r = Renaming::new(&clashing, &taken);
        let mut t = self.clone();
        t.delta = r.apply(&self.delta);
        t.pred_map = self.pred_map.iter().map(|(p, f)| (p.clone(), r.apply(f))).collect();
        t.identity = self.identity.as_ref().map(|f| r.apply(f));
        t.params = self.params.iter().map(|p| r.var(p)).collect();
        t.eq_vars = self.eq_vars.iter().map(|p| r.var(p)).collect();
        t.param_domain = r.apply(&self.param_domain);
        t.param_eq = r.apply(&self.param_eq);
        t
    }
}

fn same_preds(a: &Signature, b: &Signature) -> bool {
    a.preds().eq(b.preds())
}

/// The identity translation: dimension 1, domain `v = v`, `P` mapped to itself.
pub fn make_identity(sig: &Signature) -> Translation {
    let v0 = slot(0);
    let mut spec = TranslationSpec::new(&format!("id_{}", sig.name), sig.clone(), sig.clone(), 1, Formula::eq_vars(&v0, &v0));
    for (p, k) in sig.preds() {
        spec.preds.insert(p.to_string(), Formula::atom_vars(p, &slots(0..k)));
    }
    Translation::new(spec).expect("identity translation is well formed")
}

/// `tau` followed by `nu`: `A^(tau nu) = (A^tau)^nu` up to equivalence, dimension `m_tau * m_nu`.
pub fn compose(tau: &Translation, nu: &Translation) -> Result<Translation, TranslationError> {
    if !same_preds(&tau.target, &nu.source) {
        return Err(TranslationError::SignatureMismatch(format!(
            "target of {} differs from source of {}",
            tau.name, nu.name
        )));
    }
    let tau = tau.rename_params_away(&nu.reserved_names());
    let (mt, mn) = (tau.dim, nu.dim);
    let blocks_guard = |count: usize| -> Vec<Formula> {
        (0..count).map(|j| nu.delta_on(&block(&slot(j), mn))).collect()
    };
    let mut delta_parts = blocks_guard(mt);
    delta_parts.push(nu.apply(&tau.delta, None)?);
    let delta = Formula::conj(delta_parts);
    let mut pred_map = BTreeMap::new();
    for (p, k) in tau.source.preds() {
        let mut parts = blocks_guard(k * mt);
        parts.push(nu.apply(&tau.pred_map[p], None)?);
        pred_map.insert(p.to_string(), Formula::conj(parts));
    }
    let identity = if tau.identity.is_none() && nu.identity.is_none() {
        None
    } else {
        let mut parts = blocks_guard(2 * mt);
        parts.push(nu.apply(&tau.identity_formula(), None)?);
        Some(Formula::conj(parts))
    };
    let u_blocks: Vec<Var> = tau.params.iter().flat_map(|u| block(u, mn)).collect();
    let z_blocks: Vec<Var> = tau.eq_vars.iter().flat_map(|u| block(u, mn)).collect();
    let (param_domain, param_eq) = if tau.params.is_empty() {
        (nu.param_domain.clone(), nu.param_eq.clone())
    } else {
        let mut pi = vec![nu.param_domain.clone()];
        pi.extend(tau.params.iter().map(|u| nu.delta_on(&block(u, mn))));
        pi.push(nu.apply(&tau.param_domain, None)?);
        let mut eq = vec![nu.param_eq.clone()];
        eq.extend(tau.params.iter().map(|u| nu.delta_on(&block(u, mn))));
        eq.extend(tau.eq_vars.iter().map(|u| nu.delta_on(&block(u, mn))));
        eq.push(nu.apply(&tau.param_eq, None)?);
        (Formula::conj(pi), Formula::conj(eq))
    };
    let params: Vec<Var> = nu.params.iter().cloned().chain(u_blocks).collect();
    let eq_vars: Vec<Var> = nu.eq_vars.iter().cloned().chain(z_blocks).collect();
    Translation::assemble(
        format!("{}.{}", tau.name, nu.name),
        tau.source.clone(),
        nu.target.clone(),
        mt * mn,
        delta,
        pred_map,
        identity,
        params,
        param_domain,
        param_eq,
        eq_vars,
    )
}

/// The case split `tau<A>nu`: behaves as `tau` where the sentence `A` holds and
/// as `nu` elsewhere. The shorter translation's blocks are padded with unused
/// components, so identity is always given explicitly.
pub fn disjunctive(tau: &Translation, case: &Formula, nu: &Translation) -> Result<Translation, TranslationError> {
    if !same_preds(&tau.source, &nu.source) || !same_preds(&tau.target, &nu.target) {
        return Err(TranslationError::SignatureMismatch(format!("{} and {} differ in signature", tau.name, nu.name)));
    }
    if let Some(v) = case.free_vars().into_iter().next() {
        return Err(TranslationError::NotSentence(v));
    }
    let shared: BTreeSet<Arc<str>> = tau.reserved_names().intersection(&nu.reserved_names()).cloned().collect();
    if let Some(n) = shared.into_iter().next() {
        return Err(TranslationError::BadParameter(n.to_string()));
    }
    let m = tau.dim.max(nu.dim);
    let relayout = |t: &Translation, f: &Formula, blocks: usize| -> Formula {
        instantiate(
            f,
            (0..blocks).flat_map(|i| (0..t.dim).map(move |k| (slot(i * t.dim + k), slot(i * m + k)))),
        )
    };
    let split = |a: Formula, b: Formula| {
        Formula::or(Formula::and(case.clone(), a), Formula::and(Formula::not(case.clone()), b))
    };
    let delta = split(tau.delta.clone(), nu.delta.clone());
    let mut pred_map = BTreeMap::new();
    for (p, k) in tau.source.preds() {
        pred_map.insert(
            p.to_string(),
            split(relayout(tau, &tau.pred_map[p], k), relayout(nu, &nu.pred_map[p], k)),
        );
    }
    let identity = split(relayout(tau, &tau.identity_formula(), 2), relayout(nu, &nu.identity_formula(), 2));
    Translation::assemble(
        format!("{}<case>{}", tau.name, nu.name),
        tau.source.clone(),
        tau.target.clone(),
        m,
        delta,
        pred_map,
        Some(identity),
        tau.params.iter().chain(&nu.params).cloned().collect(),
        Formula::and(tau.param_domain.clone(), nu.param_domain.clone()),
        Formula::and(tau.param_eq.clone(), nu.param_eq.clone()),
        tau.eq_vars.iter().chain(&nu.eq_vars).cloned().collect(),
    )
}

/// True if `a` and `b` are the same translation up to renaming of bound variables.
pub fn alpha_equivalent(a: &Translation, b: &Translation) -> bool {
    a.dim == b.dim
        && a.params == b.params
        && alpha_eq(&a.delta, &b.delta)
        && alpha_eq(&a.identity_formula(), &b.identity_formula())
        && a.pred_map.len() == b.pred_map.len()
        && a.pred_map.iter().all(|(p, f)| b.pred_map.get(p).is_some_and(|g| alpha_eq(f, g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_lenient;

    fn sig1() -> Signature {
        Signature::with_preds("s", &[("P", 1)]).unwrap()
    }

    #[test]
    fn identity_shape() {
        let id = make_identity(&sig1());
        assert_eq!(id.delta().to_string(), "v = v");
        assert_eq!(id.pred_image("P").unwrap().to_string(), "P(v)");
        assert_eq!(id.rho_star(), 1);
        let f = parse_lenient("forall x. P(x)").unwrap();
        assert_eq!(id.apply(&f, None).unwrap().to_string(), "forall x. (x = x -> P(x))");
        let g = parse_lenient("exists x. P(x)").unwrap();
        assert_eq!(id.apply(&g, None).unwrap().to_string(), "exists x. (x = x /\\ P(x))");
    }

    #[test]
    fn two_dimensional_quantifier_clause() {
        let target = Signature::with_preds("t", &[("R", 2), ("D", 2)]).unwrap();
        let spec = TranslationSpec::new("t2", sig1(), target, 2, parse_lenient("D(v_0,v_1)").unwrap())
            .pred("P", parse_lenient("R(v_0,v_1)").unwrap());
        let t = Translation::new(spec).unwrap();
        assert_eq!(t.pred_image("P").unwrap().to_string(), "(D(v,v_1) /\\ R(v,v_1))");
        let out = t.apply(&parse_lenient("forall x. P(x)").unwrap(), None).unwrap();
        assert_eq!(out.to_string(), "forall x. forall x_1. (D(x,x_1) -> (D(x,x_1) /\\ R(x,x_1)))");
    }

    #[test]
    fn rho_star_of_quantified_domain() {
        let target = Signature::with_preds("t", &[("R", 2), ("P", 1)]).unwrap();
        let spec = TranslationSpec::new("q", sig1(), target, 1, parse_lenient("forall y. R(v,y)").unwrap())
            .pred("P", parse_lenient("P(v)").unwrap());
        assert!(Translation::new(spec).unwrap().rho_star() >= 2);
    }

    #[test]
    fn composition_dimension() {
        let t2 = Signature::with_preds("t", &[("P", 1)]).unwrap();
        let a = Translation::new(
            TranslationSpec::new("a", sig1(), t2.clone(), 2, Formula::Top).pred("P", parse_lenient("P(v) /\\ P(v_1)").unwrap()),
        )
        .unwrap();
        let b = Translation::new(
            TranslationSpec::new("b", t2.clone(), t2, 3, Formula::Top)
                .pred("P", parse_lenient("P(v) \\/ P(v_2)").unwrap()),
        )
        .unwrap();
        assert_eq!(compose(&a, &b).unwrap().dim(), 6);
        assert!(matches!(compose(&b, &make_identity(&Signature::with_preds("x", &[("Q", 1)]).unwrap())), Err(TranslationError::SignatureMismatch(_))));
    }

    #[test]
    fn disjunctive_pads_shorter_branch() {
        let t = Signature::with_preds("t", &[("P", 1), ("C", 0)]).unwrap();
        let one = Translation::new(TranslationSpec::new("one", sig1(), t.clone(), 1, Formula::Top).pred("P", parse_lenient("P(v)").unwrap())).unwrap();
        let two = Translation::new(
            TranslationSpec::new("two", sig1(), t, 2, Formula::Top).pred("P", parse_lenient("P(v) /\\ P(v_1)").unwrap()),
        )
        .unwrap();
        let s = disjunctive(&one, &Formula::atom("C", vec![]), &two).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.pred_image("P").unwrap().to_string(), "((C /\\ P(v)) \\/ (~C /\\ (P(v) /\\ P(v_1))))");
        assert!(matches!(
            disjunctive(&one, &parse_lenient("P(x)").unwrap(), &two),
            Err(TranslationError::NotSentence(_))
        ));
    }

    #[test]
    fn parameters_stay_apart_from_source_variables() {
        let t = Signature::with_preds("t", &[("P", 1), ("R", 2)]).unwrap();
        let spec = TranslationSpec::new("p", sig1(), t, 1, parse_lenient("R(w,v)").unwrap())
            .pred("P", parse_lenient("P(v)").unwrap())
            .params(vec![Var::new("w", 0)], None);
        let tr = Translation::new(spec).unwrap();
        let out = tr.apply(&parse_lenient("exists w. P(w)").unwrap(), None).unwrap();
        assert_eq!(out.to_string(), "exists wx. (R(w,wx) /\\ (R(w,wx) /\\ P(wx)))");
        let bound = tr.apply(&parse_lenient("exists w. P(w)").unwrap(), Some(&[Var::new("a", 0)])).unwrap();
        assert_eq!(bound.to_string(), "exists wx. (R(a,wx) /\\ (R(a,wx) /\\ P(wx)))");
    }
}
