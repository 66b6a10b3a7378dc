use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Invalid(String),
    #[error("internal invariant breached: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } | CliError::Invalid(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }
}

macro_rules! invalid_from {
    ($($t:ty),* $(,)?) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> CliError {
                CliError::Invalid(e.to_string())
            }
        })*
    };
}

invalid_from!(
    seqlogic::fol::ParseError,
    seqlogic::fol::SigError,
    seqlogic::translations::TranslationError,
    seqlogic::translations::TranslationFileError,
    seqlogic::models::ModelError,
    seqlogic::arith::ArithError,
    seqlogic::satgen::SatgenError,
    seqlogic::proof::ProofError,
    seqlogic::proof::ProofParseError,
);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let io = CliError::Io { path: "f".into(), source: std::io::Error::from(std::io::ErrorKind::NotFound) };
        assert_eq!(CliError::Usage("u".into()).code(), 1);
        assert_eq!(io.code(), 2);
        assert_eq!(CliError::from(seqlogic::proof::ProofError::Empty).code(), 2);
        assert_eq!(CliError::Invariant("i".into()).code(), 3);
    }
}
