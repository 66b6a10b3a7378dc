use std::collections::{BTreeMap, BTreeSet};

use super::SatgenError;
use crate::fol::{parse_lenient, substitute_many, Formula, Term, Var};

pub const DEFS: &str = include_str!("../../templates/v1/defs.tpl");
pub const AXIOMS: &str = include_str!("../../templates/v1/axioms.tpl");
pub const SAT: &str = include_str!("../../templates/v1/sat.tpl");
pub const CUTS: &str = include_str!("../../templates/v1/cuts.tpl");
pub const SHORTEN: &str = include_str!("../../templates/v1/shorten.tpl");

/// The reserved default-value parameter of `val`.
pub fn xstar() -> Var {
    Var::new("xstar", 0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Def {
    pub name: String,
    pub params: Vec<Var>,
    pub body: Formula,
}

/// Named formula schemata. Atoms whose predicate names a definition are
/// macro calls; other atoms are either signature symbols or placeholders
/// filled in by a resolver.
#[derive(Clone, Debug, Default)]
pub struct TemplateSet {
    defs: Vec<Def>,
    index: BTreeMap<String, usize>,
}

/// `body[formals := args]`, capture-avoiding.
pub fn plug(body: &Formula, formals: &[Var], args: &[Var]) -> Formula {
    let map: BTreeMap<Var, Term> = formals.iter().cloned().zip(args.iter().map(Term::var)).collect();
    substitute_many(body, &map)
}

fn parse_header(head: &str, line: usize) -> Result<(String, Vec<Var>), SatgenError> {
    let bad = |msg: &str| SatgenError::Template { line, msg: msg.to_string() };
    let head = head.trim();
    let (name, params) = match head.find('(') {
        None => (head, Vec::new()),
        Some(open) => {
            let inner = head[open + 1..].strip_suffix(')').ok_or_else(|| bad("unclosed parameter list"))?;
            let params = inner
                .split(',')
                .map(str::trim)
                .filter(|p| !p.is_empty())
                .map(Var::from_ident)
                .collect::<Vec<_>>();
            (&head[..open], params)
        }
    };
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(bad("bad definition name"));
    }
    Ok((name.to_string(), params))
}

impl TemplateSet {
    pub fn parse(text: &str) -> Result<TemplateSet, SatgenError> {
        let mut entries: Vec<(usize, String)> = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            if line.starts_with(char::is_whitespace) {
                let (_, last) = entries
                    .last_mut()
                    .ok_or_else(|| SatgenError::Template { line: no + 1, msg: "continuation before any definition".into() })?;
                last.push(' ');
                last.push_str(line.trim());
            } else {
                entries.push((no + 1, line.trim().to_string()));
            }
        }
        let mut set = TemplateSet::default();
        for (line, entry) in entries {
            let (head, body) = entry
                .split_once(":=")
                .ok_or_else(|| SatgenError::Template { line, msg: "expected `name(params) := body`".into() })?;
            let (name, params) = parse_header(head, line)?;
            let body = parse_lenient(body).map_err(|e| SatgenError::Template { line, msg: e.to_string() })?;
            let mut allowed: BTreeSet<Var> = params.iter().cloned().collect();
            allowed.insert(xstar());
            if let Some(v) = body.free_vars().into_iter().find(|v| !allowed.contains(v)) {
                return Err(SatgenError::Template { line, msg: format!("`{name}` has stray free variable {v}") });
            }
            set.insert(Def { name, params, body })
                .map_err(|name| SatgenError::Template { line, msg: format!("`{name}` defined twice") })?;
        }
        Ok(set)
    }

    fn insert(&mut self, def: Def) -> Result<(), String> {
        if self.index.contains_key(&def.name) {
            return Err(def.name);
        }
        self.index.insert(def.name.clone(), self.defs.len());
        self.defs.push(def);
        Ok(())
    }

    /// Every bundled template file in one set.
    pub fn standard() -> TemplateSet {
        let mut set = TemplateSet::default();
        for text in [DEFS, AXIOMS, SAT, CUTS, SHORTEN] {
            for def in TemplateSet::parse(text).expect("bundled templates parse").defs {
                set.insert(def).expect("bundled template names are distinct");
            }
        }
        set
    }

    pub fn get(&self, name: &str) -> Option<&Def> {
        self.index.get(name).map(|&i| &self.defs[i])
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.defs.iter().map(|d| d.name.as_str())
    }

    /// Expands macro calls recursively. Other atoms go to `resolve`, which may
    /// replace them; atoms it declines stay as they are.
    pub fn expand(&self, f: &Formula, resolve: &dyn Fn(&str, &[Var]) -> Option<Formula>) -> Result<Formula, SatgenError> {
        self.expand_depth(f, resolve, 0)
    }

    fn expand_depth(
        &self,
        f: &Formula,
        resolve: &dyn Fn(&str, &[Var]) -> Option<Formula>,
        depth: usize,
    ) -> Result<Formula, SatgenError> {
        if depth > 64 {
            return Err(SatgenError::Template { line: 0, msg: "definitions nest too deeply".into() });
        }
        let mut err = None;
        let out = f.map_atoms(&mut |atom| {
            let Formula::Atom(p, args) = atom else { return atom.clone() };
            let vars: Option<Vec<Var>> = args.iter().map(|t| t.as_var().cloned()).collect();
            let Some(vars) = vars else { return atom.clone() };
            if let Some(def) = self.get(p) {
                if def.params.len() != vars.len() {
                    err.get_or_insert(SatgenError::Arity {
                        name: p.to_string(),
                        expected: def.params.len(),
                        got: vars.len(),
                    });
                    return atom.clone();
                }
                match self.expand_depth(&def.body, resolve, depth + 1) {
                    Ok(body) => plug(&body, &def.params, &vars),
                    Err(e) => {
                        err.get_or_insert(e);
                        atom.clone()
                    }
                }
            } else {
                resolve(p, &vars).unwrap_or_else(|| atom.clone())
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    /// Expands definition `name` at `args`.
    pub fn instantiate(
        &self,
        name: &str,
        args: &[Var],
        resolve: &dyn Fn(&str, &[Var]) -> Option<Formula>,
    ) -> Result<Formula, SatgenError> {
        let def = self.get(name).ok_or_else(|| SatgenError::UnknownName(name.to_string()))?;
        if def.params.len() != args.len() {
            return Err(SatgenError::Arity { name: name.to_string(), expected: def.params.len(), got: args.len() });
        }
        let body = self.expand(&def.body, resolve)?;
        Ok(plug(&body, &def.params, args))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_templates_load() {
        let set = TemplateSet::standard();
        for name in ["pair", "val", "step_optimized", "jstar", "istar", "AS1"] {
            assert!(set.get(name).is_some(), "{name}");
        }
    }

    #[test]
    fn continuation_and_errors() {
        let set = TemplateSet::parse("f(x) := P(x)\n    /\\ Q(x)\n# note\ng := top\n").unwrap();
        assert_eq!(set.get("f").unwrap().body.to_string(), "(P(x) /\\ Q(x))");
        assert!(set.get("g").unwrap().params.is_empty());
        assert!(matches!(TemplateSet::parse("f(x) := P(y)"), Err(SatgenError::Template { line: 1, .. })));
        assert!(matches!(TemplateSet::parse("  P(x)"), Err(SatgenError::Template { .. })));
        assert!(matches!(TemplateSet::parse("f(x) := P(x)\nf(y) := Q(y)"), Err(SatgenError::Template { line: 2, .. })));
    }

    #[test]
    fn expansion_avoids_capture() {
        let set = TemplateSet::parse("h(u) := exists a. R(a,u)\nk(a) := h(a)").unwrap();
        let f = set.instantiate("k", &[Var::new("a", 0)], &|_, _| None).unwrap();
        assert_eq!(f.to_string(), "exists a_1. R(a_1,a)");
        assert!(matches!(set.instantiate("h", &[], &|_, _| None), Err(SatgenError::Arity { .. })));
    }
}
