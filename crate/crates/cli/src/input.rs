use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use seqlogic::arith::number_signature;
use seqlogic::fol::{parse, parse_lenient, parse_signature, Formula, Signature};
use seqlogic::models::{parse_model, FiniteModel};
use seqlogic::satgen::frame_signature;
use seqlogic::translations::{parse_translations, Translation};

use crate::error::CliError;

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Formulas from a file (one per line, `#` comments) or from the command line.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct FormulaInput {
    /// File with one formula per line.
    #[arg(long, value_name = "FILE")]
    pub formula: Option<PathBuf>,
    /// A single formula given inline.
    #[arg(long, value_name = "TEXT")]
    pub expr: Option<String>,
}

impl FormulaInput {
    pub fn load(&self, sig: Option<&Signature>) -> Result<Vec<Formula>, CliError> {
        let text = match (&self.formula, &self.expr) {
            (Some(path), _) => read(path)?,
            (None, Some(expr)) => expr.clone(),
            (None, None) => return Err(CliError::Usage("one of --formula or --expr is required".into())),
        };
        let formulas = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(|l| parse_formula(l, sig))
            .collect::<Result<Vec<_>, _>>()?;
        if formulas.is_empty() {
            return Err(CliError::Invalid("no formula given".into()));
        }
        Ok(formulas)
    }
}

pub fn parse_formula(text: &str, sig: Option<&Signature>) -> Result<Formula, CliError> {
    Ok(match sig {
        Some(s) => parse(text, s)?,
        None => parse_lenient(text)?,
    })
}

/// A signature file; its name is the file stem.
pub fn signature(path: &Path) -> Result<Signature, CliError> {
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("sig");
    Ok(parse_signature(name, &read(path)?)?)
}

/// The built-in signatures `arith`, `Num` and `frame`, plus the given files.
pub fn signatures(paths: &[PathBuf]) -> Result<BTreeMap<String, Signature>, CliError> {
    let mut sigs = BTreeMap::new();
    for s in [Signature::arithmetic(), number_signature(), frame_signature()] {
        sigs.insert(s.name.clone(), s);
    }
    for p in paths {
        let s = signature(p)?;
        sigs.insert(s.name.clone(), s);
    }
    Ok(sigs)
}

pub fn translations(path: &Path, sig_files: &[PathBuf]) -> Result<Vec<Translation>, CliError> {
    Ok(parse_translations(&read(path)?, &signatures(sig_files)?)?)
}

pub fn translation(path: &Path, sig_files: &[PathBuf], name: &str) -> Result<Translation, CliError> {
    translations(path, sig_files)?
        .into_iter()
        .find(|t| t.name == name)
        .ok_or_else(|| CliError::Invalid(format!("{}: no translation named `{name}`", path.display())))
}

pub fn model(path: &Path) -> Result<FiniteModel, CliError> {
    Ok(parse_model(&read(path)?)?)
}

pub fn elements(model: &FiniteModel, names: &[String]) -> Result<Vec<usize>, CliError> {
    names
        .iter()
        .map(|n| model.element(n).ok_or_else(|| CliError::Invalid(format!("unknown element `{n}`"))))
        .collect()
}

/// Size limits for printed and emitted formulas. Shared subformulas are
/// written out in full, so text size follows the symbol count.
#[derive(Clone, Copy, Debug)]
pub struct OutputLimits {
    pub print: usize,
    pub emit: usize,
}

/// Writes the formula to `emit`, or returns its text when it is small enough
/// for standard output.
pub fn formula_output(f: &Formula, emit: Option<&Path>, limits: OutputLimits) -> Result<String, CliError> {
    let symbols = f.symbol_count();
    if let Some(path) = emit {
        if symbols > limits.emit {
            return Err(CliError::Invalid(format!(
                "formula has {symbols} symbols, above --max-emit-symbols {}",
                limits.emit
            )));
        }
        write(path, &format!("{f}\n"))?;
        return Ok(format!("wrote {} ({symbols} symbols)", path.display()));
    }
    if symbols > limits.print {
        return Ok(format!("formula omitted: {symbols} symbols exceed --max-symbols {}; use --emit", limits.print));
    }
    Ok(f.to_string())
}
