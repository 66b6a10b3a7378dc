//! Symbolic workbench for sequential theories: formulas, the quantifier
//! alternation measure, translations, finite models, arithmetization,
//! satisfaction-predicate generation and a restricted proof checker.

pub mod arith;
pub mod complexity;
pub mod fol;
pub mod models;
pub mod proof;
pub mod satgen;
pub mod testgen;
pub mod translations;
