//! Line-oriented proof files:
//!
//! ```text
//! # comment
//! level 1
//! theorem P |- P \/ Q
//! step 1: P |- P ; rule assume
//! step 2: P |- P \/ Q ; rule or_i1 from 1
//! ```
//!
//! Assumptions are separated by top-level commas, steps are numbered from 1
//! and `from` lists earlier step numbers.

use std::fmt;

use thiserror::Error;

use super::{ProofObject, Rule, Sequent, Step};
use crate::fol::{parse_lenient, Formula};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ProofParseError {
    pub line: usize,
    pub msg: String,
}

fn split_top_level(text: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

fn sequent(text: &str, line: usize) -> Result<Sequent, ProofParseError> {
    let err = |msg: String| ProofParseError { line, msg };
    let (ctx, goal) = text.split_once("|-").ok_or_else(|| err("missing `|-`".into()))?;
    let formula = |s: &str| parse_lenient(s.trim()).map_err(|e| err(e.to_string()));
    let assumptions = if ctx.trim().is_empty() {
        Vec::new()
    } else {
        split_top_level(ctx).into_iter().map(formula).collect::<Result<Vec<Formula>, _>>()?
    };
    Ok(Sequent::new(assumptions, formula(goal)?))
}

fn step(rest: &str, expected: usize, line: usize) -> Result<Step, ProofParseError> {
    let err = |msg: String| ProofParseError { line, msg };
    let (number, body) = rest.split_once(':').ok_or_else(|| err("expected `step <i>:`".into()))?;
    let number: usize = number.trim().parse().map_err(|_| err(format!("bad step number `{}`", number.trim())))?;
    if number != expected {
        return Err(err(format!("expected step {expected}, found step {number}")));
    }
    let (seq, justification) = body.rsplit_once(';').ok_or_else(|| err("missing `; rule <tag>`".into()))?;
    let mut words = justification.split(|c: char| c.is_whitespace() || c == ',').filter(|w| !w.is_empty());
    if words.next() != Some("rule") {
        return Err(err("expected `rule` after `;`".into()));
    }
    let rule: Rule = words.next().ok_or_else(|| err("missing rule tag".into()))?.parse().map_err(err)?;
    let mut premises = Vec::new();
    match words.next() {
        None => {}
        Some("from") => {
            for w in words {
                let p: usize = w.parse().map_err(|_| err(format!("bad premise `{w}`")))?;
                if p == 0 {
                    return Err(err("steps are numbered from 1".into()));
                }
                premises.push(p - 1);
            }
        }
        Some(w) => return Err(err(format!("unexpected `{w}`"))),
    }
    Ok(Step { sequent: sequent(seq, line)?, rule, premises })
}

pub fn parse_proof(text: &str) -> Result<ProofObject, ProofParseError> {
    let mut level = None;
    let mut theorem = None;
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
        let err = |msg: String| ProofParseError { line, msg };
        match keyword {
            "level" => {
                if level.is_some() {
                    return Err(err("duplicate `level`".into()));
                }
                level = Some(rest.trim().parse::<u32>().map_err(|_| err(format!("bad level `{}`", rest.trim())))?);
            }
            "theorem" => theorem = Some(sequent(rest, line)?),
            "step" => steps.push(step(rest, steps.len() + 1, line)?),
            _ => return Err(err(format!("unexpected `{keyword}`"))),
        }
    }
    let level = level.ok_or(ProofParseError { line: 0, msg: "missing `level <n>` line".into() })?;
    Ok(ProofObject { level, steps, theorem })
}

impl fmt::Display for ProofObject {
    /// Writes the proof in the format read by [`parse_proof`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "level {}", self.level)?;
        if let Some(t) = &self.theorem {
            writeln!(f, "theorem {t}")?;
        }
        for (i, s) in self.steps.iter().enumerate() {
            write!(f, "step {}: {} ; rule {}", i + 1, s.sequent, s.rule)?;
            if !s.premises.is_empty() {
                let from: Vec<String> = s.premises.iter().map(|p| (p + 1).to_string()).collect();
                write!(f, " from {}", from.join(" "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
