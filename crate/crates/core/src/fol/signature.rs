use std::collections::BTreeMap;

use thiserror::Error;

/// The arithmetic/set block with its fixed arities. Membership and the two
/// orderings are written `In`, `Le` and `Lt` in ASCII formula text.
pub const ARITHMETIC_SYMBOLS: [(&str, usize); 9] = [
    ("N", 1),
    ("Z", 1),
    ("In", 2),
    ("E", 2),
    ("Le", 2),
    ("Lt", 2),
    ("S", 2),
    ("A", 3),
    ("M", 3),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SigError {
    #[error("symbol `{0}` declared twice")]
    Duplicate(String),
    #[error("reserved symbol `{name}` must have arity {expected}, got {got}")]
    ReservedArity { name: String, expected: usize, got: usize },
    #[error("constant `{0}` declared but constants are disabled")]
    ConstantsDisabled(String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub name: String,
    preds: BTreeMap<String, usize>,
    funs: BTreeMap<String, usize>,
    /// Whether nullary function symbols (constants) may be declared.
    pub constants_as_nullary: bool,
}

impl Signature {
    pub fn new(name: impl Into<String>) -> Signature {
        Signature {
            name: name.into(),
            preds: BTreeMap::new(),
            funs: BTreeMap::new(),
            constants_as_nullary: true,
        }
    }

    /// The signature of adjunctive set theory with extras.
    pub fn arithmetic() -> Signature {
        let mut sig = Signature::new("AS+");
        for (p, k) in ARITHMETIC_SYMBOLS {
            sig.add_pred(p, k).expect("fixed block is consistent");
        }
        sig
    }

    pub fn with_preds(name: &str, preds: &[(&str, usize)]) -> Result<Signature, SigError> {
        let mut sig = Signature::new(name);
        for (p, k) in preds {
            sig.add_pred(p, *k)?;
        }
        Ok(sig)
    }

    fn check_new(&self, name: &str, arity: usize) -> Result<(), SigError> {
        if self.preds.contains_key(name) || self.funs.contains_key(name) {
            return Err(SigError::Duplicate(name.to_string()));
        }
        if let Some((_, k)) = ARITHMETIC_SYMBOLS.iter().find(|(p, _)| *p == name) {
            if *k != arity {
                return Err(SigError::ReservedArity { name: name.to_string(), expected: *k, got: arity });
            }
        }
        Ok(())
    }

    pub fn add_pred(&mut self, name: &str, arity: usize) -> Result<(), SigError> {
        self.check_new(name, arity)?;
        self.preds.insert(name.to_string(), arity);
        Ok(())
    }

    pub fn add_fun(&mut self, name: &str, arity: usize) -> Result<(), SigError> {
        self.check_new(name, arity)?;
        if arity == 0 && !self.constants_as_nullary {
            return Err(SigError::ConstantsDisabled(name.to_string()));
        }
        self.funs.insert(name.to_string(), arity);
        Ok(())
    }

    pub fn pred_arity(&self, name: &str) -> Option<usize> {
        self.preds.get(name).copied()
    }

    pub fn fun_arity(&self, name: &str) -> Option<usize> {
        self.funs.get(name).copied()
    }

    pub fn preds(&self) -> impl Iterator<Item = (&str, usize)> {
        self.preds.iter().map(|(p, k)| (p.as_str(), *k))
    }

    pub fn funs(&self) -> impl Iterator<Item = (&str, usize)> {
        self.funs.iter().map(|(p, k)| (p.as_str(), *k))
    }

    pub fn is_relational(&self) -> bool {
        self.funs.is_empty()
    }

    /// Disjoint union; symbols present in both must agree on kind and arity.
    pub fn merge(&self, other: &Signature, name: &str) -> Result<Signature, SigError> {
        let mut out = self.clone();
        out.name = name.to_string();
        for (p, k) in other.preds() {
            match out.pred_arity(p) {
                Some(j) if j == k => {}
                _ => out.add_pred(p, k)?,
            }
        }
        for (f, k) in other.funs() {
            match out.fun_arity(f) {
                Some(j) if j == k => {}
                _ => out.add_fun(f, k)?,
            }
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (p, k) in self.preds() {
            s.push_str(&format!("pred {p} {k}\n"));
        }
        for (f, k) in self.funs() {
            s.push_str(&format!("fun {f} {k}\n"));
        }
        s
    }
}

/// Reads the line format `pred P 3` / `fun f 2`; `#` starts a comment.
pub fn parse_signature(name: &str, text: &str) -> Result<Signature, SigError> {
    let mut sig = Signature::new(name);
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |msg: &str| SigError::Syntax { line: i + 1, msg: msg.to_string() };
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [kind, sym, arity] = parts[..] else {
            return Err(syntax("expected `pred <name> <arity>` or `fun <name> <arity>`"));
        };
        if !is_identifier(sym) {
            return Err(syntax("symbol names are ASCII identifiers"));
        }
        let arity: usize = arity.parse().map_err(|_| syntax("arity must be a number"))?;
        match kind {
            "pred" => sig.add_pred(sym, arity)?,
            "fun" => sig.add_fun(sym, arity)?,
            _ => return Err(syntax("line must start with `pred` or `fun`")),
        }
    }
    Ok(sig)
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(s, "forall" | "exists" | "top" | "bot")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_signature_file() {
        let sig = parse_signature("t", "pred P 3\nfun f 2 # graph\n\n").unwrap();
        assert_eq!(sig.pred_arity("P"), Some(3));
        assert_eq!(sig.fun_arity("f"), Some(2));
        assert!(!sig.is_relational());
    }

    #[test]
    fn rejects_duplicates_and_reserved_arity() {
        assert_eq!(parse_signature("t", "pred P 1\nfun P 1"), Err(SigError::Duplicate("P".into())));
        assert!(matches!(parse_signature("t", "pred S 1"), Err(SigError::ReservedArity { .. })));
        assert!(matches!(parse_signature("t", "relation R 2"), Err(SigError::Syntax { line: 1, .. })));
    }

    #[test]
    fn arithmetic_block_has_fixed_arities() {
        let sig = Signature::arithmetic();
        assert_eq!(sig.pred_arity("A"), Some(3));
        assert_eq!(sig.pred_arity("In"), Some(2));
        assert_eq!(sig.preds().count(), 9);
    }
}
