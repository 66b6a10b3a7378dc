//! Arithmetization: Gödel codes, numerals relative to a number translation,
//! witness comparison and the Rosser sentence with its complexity budget.

mod godel;
mod numeral;
mod rosser;

use thiserror::Error;

use crate::complexity::{profile_with, ComplexityProfile};
use crate::fol::{Formula, Signature};
use crate::translations::{slot, slots, Translation, TranslationError, TranslationSpec};

pub use godel::{encode_tokens, godel_decode, godel_encode, pair, tokens, unpair, GodelCode};
pub use numeral::{numeral, numeral_at, numeral_source, substitute_numeral, Numeral};
pub use rosser::{
    c11, rosser_sentence, sub_oracle, threshold, threshold_values, witness_compare, BudgetReport, RosserSentence,
    WitnessComparison,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("invalid Gödel code: {0}")]
    InvalidCode(String),
    #[error("shape violation: {0}")]
    Shape(String),
    #[error("rho0 of the sentence is {rho0}, above the budget {budget}")]
    BudgetViolation { rho0: u32, budget: u32 },
    #[error("level {n} is below the threshold {threshold}")]
    BelowThreshold { n: u32, threshold: u32 },
    #[error("expected a free block of {expected} variables, found {found}")]
    FreeBlock { expected: usize, found: usize },
    #[error("stipulated profiles must be at least 1")]
    Profile,
    #[error(transparent)]
    Translation(#[from] TranslationError),
}

pub const SUB: &str = "Sub";
pub const PROV: &str = "Prov";

/// The relational number language that the number translation interprets.
pub fn number_signature() -> Signature {
    Signature::with_preds(
        "Num",
        &[("Z", 1), ("S", 2), ("A", 3), ("M", 3), ("Le", 2), ("Lt", 2), (SUB, 3), (PROV, 2)],
    )
    .expect("fixed signature")
}

/// The number translation together with stipulated complexities of the
/// substitution and provability predicates.
#[derive(Clone, Debug)]
pub struct ArithContext {
    pub numbers: Translation,
    pub sub_rho0: u32,
    pub prov_rho0: u32,
    pub scheme_rho0: u32,
}

impl ArithContext {
    /// Numbers are the one-dimensional `N`-part of the arithmetic signature,
    /// with identity read as `E` and `Sub`, `Prov` added to the target.
    pub fn standard() -> ArithContext {
        let mut target = Signature::arithmetic();
        target.name = "AS+Sub+Prov".into();
        target.add_pred(SUB, 3).expect("fresh");
        target.add_pred(PROV, 2).expect("fresh");
        let source = number_signature();
        let delta = Formula::atom_vars("N", [&slot(0)]);
        let mut spec = TranslationSpec::new("N", source.clone(), target, 1, delta)
            .identity(Formula::atom_vars("E", &slots(0..2)));
        for (p, k) in source.preds() {
            spec.preds.insert(p.to_string(), Formula::atom_vars(p, &slots(0..k)));
        }
        let numbers = Translation::new(spec).expect("standard number translation");
        let scheme_rho0 = numbers.rho_star();
        ArithContext { numbers, sub_rho0: 4, prov_rho0: 4, scheme_rho0 }
    }

    pub fn new(numbers: Translation, sub_rho0: u32, prov_rho0: u32, scheme_rho0: u32) -> Result<ArithContext, ArithError> {
        if sub_rho0 == 0 || prov_rho0 == 0 {
            return Err(ArithError::Profile);
        }
        for (p, _) in number_signature().preds() {
            if numbers.pred_image(p).is_none() {
                return Err(TranslationError::MissingPredicate(p.to_string()).into());
            }
        }
        Ok(ArithContext { numbers, sub_rho0, prov_rho0, scheme_rho0 })
    }

    pub fn with_rho(mut self, sub_rho0: u32, prov_rho0: u32) -> Result<ArithContext, ArithError> {
        if sub_rho0 == 0 || prov_rho0 == 0 {
            return Err(ArithError::Profile);
        }
        self.sub_rho0 = sub_rho0;
        self.prov_rho0 = prov_rho0;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.numbers.dim()
    }

    /// Profile with `Sub` and `Prov` atoms counted at their stipulated values.
    pub fn profile(&self, f: &Formula) -> ComplexityProfile {
        let (s, p) = (self.sub_rho0, self.prov_rho0);
        profile_with(f, &|name: &str| match name {
            SUB => Some((s, s)),
            PROV => Some((p, p)),
            _ => None,
        })
    }
}

/// Runs `f` on a thread with a large stack. Numerals for Gödel codes nest
/// thousands of quantifiers, and every traversal of such formulas recurses.
pub fn deep_stack<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(1 << 30)
            .spawn_scoped(s, f)
            .expect("spawn worker thread")
            .join()
            .unwrap_or_else(|e| std::panic::resume_unwind(e))
    })
}
