use std::collections::BTreeMap;
use std::fmt::Write;

use thiserror::Error;

use super::{Translation, TranslationError, TranslationSpec};
use crate::fol::{parse, Formula, ParseError, Signature, Var};

#[derive(Debug, Error)]
pub enum TranslationFileError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown signature `{name}`")]
    UnknownSignature { line: usize, name: String },
    #[error("line {line}: {source}")]
    Formula { line: usize, source: ParseError },
    #[error("translation `{name}`: {source}")]
    Invalid { name: String, source: TranslationError },
}

struct Pending {
    spec: TranslationSpec,
    guarded: bool,
    pi: Option<Formula>,
}

fn finish(p: Pending) -> Result<Translation, TranslationFileError> {
    let mut spec = p.spec;
    if p.pi.is_some() {
        spec.param_domain = p.pi;
    }
    let name = spec.name.clone();
    let built = if p.guarded { Translation::from_guarded(spec) } else { Translation::new(spec) };
    built.map_err(|source| TranslationFileError::Invalid { name, source })
}

/// Reads translation blocks. Besides the header, `delta:`, `pred P:`,
/// `params:`, `pi:` and `eq:` lines, a block may carry `identity:` (translated
/// identity over `v_0..v_{2m-1}`), `eqvars:` (the second parameter copy used by
/// `eq:`) and a bare `guarded` line saying the images already carry their
/// domain guards.
pub fn parse_translations(
    text: &str,
    sigs: &BTreeMap<String, Signature>,
) -> Result<Vec<Translation>, TranslationFileError> {
    let mut out = Vec::new();
    let mut cur: Option<Pending> = None;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let syntax = |msg: &str| TranslationFileError::Syntax { line, msg: msg.to_string() };
        if let Some(rest) = l.strip_prefix("translation ") {
            if let Some(p) = cur.take() {
                out.push(finish(p)?);
            }
            let (name, rest) = rest.split_once(':').ok_or_else(|| syntax("expected `name : src -> tgt dim m`"))?;
            let (src, rest) = rest.split_once("->").ok_or_else(|| syntax("expected `->`"))?;
            let (tgt, dim) = rest.split_once(" dim ").ok_or_else(|| syntax("expected `dim <m>`"))?;
            let lookup = |s: &str| {
                sigs.get(s.trim())
                    .cloned()
                    .ok_or(TranslationFileError::UnknownSignature { line, name: s.trim().to_string() })
            };
            let dim: usize = dim.trim().parse().map_err(|_| syntax("dimension is not a number"))?;
            cur = Some(Pending {
                spec: TranslationSpec::new(name.trim(), lookup(src)?, lookup(tgt)?, dim, Formula::Top),
                guarded: false,
                pi: None,
            });
            continue;
        }
        let p = cur.as_mut().ok_or_else(|| syntax("directive outside a translation block"))?;
        let target = p.spec.target.clone();
        let formula = |s: &str| parse(s.trim(), &target).map_err(|source| TranslationFileError::Formula { line, source });
        let vars = |s: &str| s.split_whitespace().map(Var::from_ident).collect::<Vec<_>>();
        if l == "guarded" {
            p.guarded = true;
        } else if let Some(r) = l.strip_prefix("delta:") {
            p.spec.delta = formula(r)?;
        } else if let Some(r) = l.strip_prefix("pred ") {
            let (name, body) = r.split_once(':').ok_or_else(|| syntax("expected `pred P: <formula>`"))?;
            p.spec.preds.insert(name.trim().to_string(), formula(body)?);
        } else if let Some(r) = l.strip_prefix("identity:") {
            p.spec.identity = Some(formula(r)?);
        } else if let Some(r) = l.strip_prefix("params:") {
            p.spec.params = vars(r);
        } else if let Some(r) = l.strip_prefix("eqvars:") {
            p.spec.eq_vars = Some(vars(r));
        } else if let Some(r) = l.strip_prefix("pi:") {
            p.pi = Some(formula(r)?);
        } else if let Some(r) = l.strip_prefix("eq:") {
            p.spec.param_eq = Some(formula(r)?);
        } else {
            return Err(syntax(&format!("unknown directive `{l}`")));
        }
    }
    if let Some(p) = cur.take() {
        out.push(finish(p)?);
    }
    Ok(out)
}

impl Translation {
    /// Writes the translation in the block format, marked `guarded` so that
    /// reading it back does not add a second layer of domain guards.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "translation {} : {} -> {} dim {}", self.name, self.source.name, self.target.name, self.dim);
        s.push_str("guarded\n");
        let _ = writeln!(s, "delta: {}", self.delta);
        for (p, f) in &self.pred_map {
            let _ = writeln!(s, "pred {p}: {f}");
        }
        if let Some(id) = &self.identity {
            let _ = writeln!(s, "identity: {id}");
        }
        if !self.params.is_empty() {
            let join = |vs: &[Var]| vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
            let _ = writeln!(s, "params: {}", join(&self.params));
            let _ = writeln!(s, "eqvars: {}", join(&self.eq_vars));
            let _ = writeln!(s, "pi: {}", self.param_domain);
            let _ = writeln!(s, "eq: {}", self.param_eq);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::translations::alpha_equivalent;

    fn sigs() -> BTreeMap<String, Signature> {
        let mut m = BTreeMap::new();
        m.insert("S".to_string(), Signature::with_preds("S", &[("P", 1)]).unwrap());
        m.insert("T".to_string(), Signature::with_preds("T", &[("P", 1), ("R", 2)]).unwrap());
        m
    }

    const TEXT: &str = "
# two translations
translation pair : S -> T dim 2
delta: R(v_0,v_1)
pred P: P(v_0)

translation par : S -> T dim 1
delta: R(w,v)
pred P: P(v)
params: w
pi: P(w)
";

    #[test]
    fn reads_blocks() {
        let ts = parse_translations(TEXT, &sigs()).unwrap();
        assert_eq!(ts.len(), 2);
        assert_eq!(ts[0].dim(), 2);
        assert_eq!(ts[0].pred_image("P").unwrap().to_string(), "(R(v,v_1) /\\ P(v))");
        assert_eq!(ts[1].params().len(), 1);
        assert_eq!(ts[1].param_domain().to_string(), "P(w)");
        assert_eq!(ts[1].param_eq().to_string(), "w = wz");
    }

    #[test]
    fn round_trip() {
        for t in parse_translations(TEXT, &sigs()).unwrap() {
            let back = parse_translations(&t.to_text(), &sigs()).unwrap();
            assert!(alpha_equivalent(&t, &back[0]));
        }
    }

    #[test]
    fn errors_are_located() {
        let bad = "translation x : S -> Q dim 1\n";
        assert!(matches!(parse_translations(bad, &sigs()), Err(TranslationFileError::UnknownSignature { line: 1, .. })));
        let missing = "translation x : S -> T dim 1\ndelta: top\n";
        assert!(matches!(parse_translations(missing, &sigs()), Err(TranslationFileError::Invalid { .. })));
        let arity = "translation x : S -> T dim 1\npred P: R(v)\n";
        assert!(matches!(parse_translations(arity, &sigs()), Err(TranslationFileError::Formula { line: 2, .. })));
    }
}
