//! Generators for the satisfaction apparatus over the frame signature
//! extended by an object signature: the axiom catalog, the definitional
//! library, the partial satisfaction family, the cut families with their
//! shortenings, and measurement of the growth constants.
//!
//! Relations about coded syntax (`Fm`, `FmAnd`, `SigmaStar`, `Nu`, ...) are
//! stipulated primitives of the frame, in the same way as the number block.

mod constants;
mod cuts;
mod sat;
mod template;

use thiserror::Error;

use crate::fol::{Formula, SigError, Signature, Var};
use crate::translations::TranslationError;

pub use constants::{fit_linear, measure_constants, NAIVE_LEVELS, ConstantsReport, FamilyFit, LinearFit};
pub use cuts::{conservative_level, cut_ref_var, gen_cut, Closure, ConservativeExtension, CutFormula, CutKind};
pub use sat::{gen_sat, SatFamily, SatMode, Sign};
pub use template::{plug, xstar, Def, TemplateSet};

pub const DEFAULT_CAP: u32 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SatgenError {
    #[error("unknown definition `{0}`")]
    UnknownName(String),
    #[error("`{name}` takes {expected} arguments, got {got}")]
    Arity { name: String, expected: usize, got: usize },
    #[error("level {n} exceeds the cap {cap}")]
    CapExceeded { n: u32, cap: u32 },
    #[error("{kind} needs a level of at least {min}, got {n}")]
    LevelTooLow { kind: String, n: u32, min: u32 },
    #[error("template line {line}: {msg}")]
    Template { line: usize, msg: String },
    #[error("object signature: {0}")]
    Theta(String),
    #[error("a cut has exactly one free variable besides its parameters; found {0:?}")]
    CutShape(Vec<String>),
    #[error("the sequence scheme must be one-dimensional, got dimension {0}")]
    SchemeDimension(usize),
    #[error(transparent)]
    Signature(#[from] SigError),
    #[error(transparent)]
    Translation(#[from] TranslationError),
}

/// Relations on codes of syntax, stipulated alongside the number block.
pub const SYNTAX_SYMBOLS: [(&str, usize); 21] = [
    ("Pos", 1),
    ("Neg", 1),
    ("Fm", 1),
    ("FmTop", 1),
    ("FmBot", 1),
    ("FmEq", 3),
    ("FmNot", 2),
    ("FmAnd", 3),
    ("FmOr", 3),
    ("FmImp", 3),
    ("FmEx", 3),
    ("FmAll", 3),
    ("SigmaStar", 2),
    ("PiStar", 2),
    ("Nu", 2),
    ("FreeVar", 2),
    ("Subst", 4),
    ("Prf", 3),
    ("Steps", 2),
    ("InProof", 2),
    ("Elem", 2),
];

pub const SMASH: &str = "Smash";

/// Placeholder atoms the generators fill in.
pub const PLACEHOLDERS: [&str; 7] = ["Sat", "Level", "Prev", "Cut", "Jddag", "AtomsTrue", "AtomsFalse"];

/// `At_P(a, u1..uk)`: `a` codes the atom `P(u1..uk)`.
pub fn atom_code_name(p: &str) -> String {
    format!("At_{p}")
}

/// The arithmetic/set block plus the stipulated syntax relations and the
/// smash graph.
pub fn frame_signature() -> Signature {
    let mut sig = Signature::arithmetic();
    sig.name = "frame".into();
    for (p, k) in SYNTAX_SYMBOLS {
        sig.add_pred(p, k).expect("syntax block is disjoint from the arithmetic block");
    }
    sig.add_pred(SMASH, 3).expect("fresh");
    sig
}

/// The frame extended disjointly by `theta` and its atom-code relations.
pub fn extended_signature(theta: &Signature, templates: &TemplateSet) -> Result<Signature, SatgenError> {
    if !theta.is_relational() {
        return Err(SatgenError::Theta("function symbols are not supported".into()));
    }
    let frame = frame_signature();
    let mut sig = frame.clone();
    sig.name = format!("frame+{}", theta.name);
    for (p, k) in theta.preds() {
        let clash = frame.pred_arity(p).is_some()
            || templates.get(p).is_some()
            || PLACEHOLDERS.contains(&p)
            || p.starts_with("At_");
        if clash {
            return Err(SatgenError::Theta(format!("`{p}` is reserved by the frame or the templates")));
        }
        sig.add_pred(p, k)?;
        sig.add_pred(&atom_code_name(p), k + 1)?;
    }
    Ok(sig)
}

/// A named block of axioms represented by its name and a stipulated `rho0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomBlock {
    pub name: String,
    pub rho0: u32,
}

#[derive(Clone, Debug)]
pub struct AxiomCatalog {
    /// `AS1`, `AS2`.
    pub adjunctive: Vec<(String, Formula)>,
    /// `ASplus2` .. `ASplus6`.
    pub extras: Vec<(String, Formula)>,
    /// `ASplus1`, the interpretation of bounded arithmetic in the number block.
    pub numbers: AxiomBlock,
}

impl AxiomCatalog {
    pub fn get(&self, name: &str) -> Option<&Formula> {
        self.adjunctive.iter().chain(&self.extras).find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn sentences(&self) -> impl Iterator<Item = (&str, &Formula)> {
        self.adjunctive.iter().chain(&self.extras).map(|(n, f)| (n.as_str(), f))
    }
}

pub fn catalog() -> AxiomCatalog {
    let set = TemplateSet::parse(template::AXIOMS).expect("bundled axioms parse");
    let pick = |prefix: &str| -> Vec<(String, Formula)> {
        set.names()
            .filter(|n| n.starts_with(prefix) && n[prefix.len()..].bytes().all(|b| b.is_ascii_digit()))
            .map(|n| (n.to_string(), set.get(n).expect("listed").body.clone()))
            .collect()
    };
    AxiomCatalog {
        adjunctive: pick("AS"),
        extras: pick("ASplus"),
        numbers: AxiomBlock { name: "ASplus1".into(), rho0: 3 },
    }
}

/// The definitional library: `pair`, `Pair`, `pi0`, `pi1`, `fun`, `dom`,
/// `app` (f(u) = v), `nfun`, `ndom`, `val` (al[a] = v), `agree` (al<a>be)
/// and `reset` (al[a:y] = be).
#[derive(Clone, Debug)]
pub struct DefLibrary {
    set: TemplateSet,
}

impl Default for DefLibrary {
    fn default() -> Self {
        DefLibrary::standard()
    }
}

impl DefLibrary {
    pub fn standard() -> DefLibrary {
        DefLibrary { set: TemplateSet::parse(template::DEFS).expect("bundled definitions parse") }
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.set.names()
    }

    pub fn def(&self, name: &str) -> Option<&Def> {
        self.set.get(name)
    }

    /// The definition fully expanded at `args`; `val` leaves `xstar` free.
    pub fn def_expand(&self, name: &str, args: &[Var]) -> Result<Formula, SatgenError> {
        self.set.instantiate(name, args, &|_, _| None)
    }
}

pub fn def_expand(name: &str, args: &[Var]) -> Result<Formula, SatgenError> {
    DefLibrary::standard().def_expand(name, args)
}

/// Generation context: the object signature, the template set and the level cap.
#[derive(Clone, Debug)]
pub struct Satgen {
    theta: Signature,
    signature: Signature,
    templates: TemplateSet,
    cap: u32,
}

impl Satgen {
    pub fn new(theta: &Signature) -> Result<Satgen, SatgenError> {
        let templates = TemplateSet::standard();
        let signature = extended_signature(theta, &templates)?;
        Ok(Satgen { theta: theta.clone(), signature, templates, cap: DEFAULT_CAP })
    }

    pub fn with_cap(mut self, cap: u32) -> Satgen {
        self.cap = cap;
        self
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn theta(&self) -> &Signature {
        &self.theta
    }

    /// The frame plus the object signature and its atom-code relations.
    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn templates(&self) -> &TemplateSet {
        &self.templates
    }

    fn check_cap(&self, n: u32) -> Result<(), SatgenError> {
        if n > self.cap {
            return Err(SatgenError::CapExceeded { n, cap: self.cap });
        }
        Ok(())
    }
}
