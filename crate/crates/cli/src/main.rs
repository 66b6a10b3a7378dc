mod commands;
mod error;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use clap::error::ErrorKind;

use input::{FormulaInput, OutputLimits};

/// Batch front end for the seqlogic workbench. Exit codes: 0 ok, 1 usage,
/// 2 parse or validation error, 3 internal invariant breach.
#[derive(Parser, Debug)]
#[command(name = "seqlogic", version)]
struct Cli {
    /// Formulas above this many symbols are not printed to standard output.
    #[arg(long, global = true, default_value_t = 200_000, value_name = "N")]
    max_symbols: usize,
    /// Formulas above this many symbols are not written by `--emit`.
    #[arg(long, global = true, default_value_t = 20_000_000, value_name = "N")]
    max_emit_symbols: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the complexity profile of each formula.
    Measure {
        #[command(flatten)]
        input: FormulaInput,
        /// Parse strictly against this signature file.
        #[arg(long, value_name = "FILE")]
        sig: Option<PathBuf>,
    },
    /// Decide membership in the starred classes at one level.
    Classify {
        #[command(flatten)]
        input: FormulaInput,
        #[arg(long)]
        level: u32,
    },
    /// Apply a translation to each formula.
    Translate {
        #[arg(long, value_name = "FILE")]
        translations: PathBuf,
        /// Name of the translation to apply.
        #[arg(long)]
        name: String,
        #[command(flatten)]
        input: FormulaInput,
        /// Signature files referenced by the translation headers.
        #[arg(long = "sig", value_name = "FILE")]
        sigs: Vec<PathBuf>,
        /// Variables to use as the parameter block.
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
    },
    /// Compose two translations, the first applied first.
    Compose {
        #[arg(long, value_name = "FILE")]
        translations: PathBuf,
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
        #[arg(long = "sig", value_name = "FILE")]
        sigs: Vec<PathBuf>,
    },
    /// Evaluate each formula in a finite model.
    Eval {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[command(flatten)]
        input: FormulaInput,
        /// Variable values as `x=a`, by element name.
        #[arg(long, value_delimiter = ',')]
        assign: Vec<String>,
    },
    /// Build the model a translation defines inside a finite model.
    InternalModel {
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
        #[arg(long, value_name = "FILE")]
        translations: PathBuf,
        #[arg(long)]
        name: String,
        #[arg(long = "sig", value_name = "FILE")]
        sigs: Vec<PathBuf>,
        /// Parameter values, by element name.
        #[arg(long, value_delimiter = ',')]
        params: Vec<String>,
        /// Source sentences to check against the translated sentences.
        #[arg(long, value_name = "FILE")]
        check: Option<PathBuf>,
    },
    /// Generate the partial satisfaction formula of level n.
    Satgen {
        #[arg(long)]
        n: u32,
        /// Object signature file.
        #[arg(long, value_name = "FILE")]
        sig: PathBuf,
        #[arg(long, default_value = "optimized")]
        mode: seqlogic::satgen::SatMode,
        #[arg(long, value_name = "FILE")]
        emit: Option<PathBuf>,
        /// Write the profile table of levels 0..=n and its linear fit.
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
    },
    /// Generate a cut formula, optionally shortened.
    Cuts {
        /// Jdag, Jcirc, Jstar, Jddag, Y or Im.
        #[arg(long)]
        kind: seqlogic::satgen::CutKind,
        #[arg(long)]
        n: u32,
        #[arg(long, value_name = "FILE")]
        sig: PathBuf,
        /// Closure steps: plus, times, omega1, down.
        #[arg(long, value_delimiter = ',')]
        shorten: Vec<String>,
        /// Quantify the parameters away.
        #[arg(long)]
        parameter_free: bool,
        #[arg(long, value_name = "FILE")]
        emit: Option<PathBuf>,
    },
    /// Build the Rosser sentence for a theory and a target formula.
    Rosser {
        /// File whose formulas are conjoined into the theory sentence.
        #[arg(long, value_name = "FILE")]
        axioms: PathBuf,
        /// Target formula, free in one number block.
        #[arg(long, value_name = "TEXT")]
        target: String,
        #[arg(long, default_value_t = 4)]
        sub_rho: u32,
        #[arg(long, default_value_t = 4)]
        prov_rho: u32,
        /// Level of the construction; defaults to the threshold.
        #[arg(long)]
        level: Option<u32>,
        #[arg(long, value_name = "FILE")]
        emit: Option<PathBuf>,
    },
    /// Build the sentence `A0 /\ forall x. (Im_n(x) -> B(x))`.
    Conservative {
        #[arg(long, value_name = "FILE")]
        sig: PathBuf,
        #[arg(long, value_name = "TEXT")]
        a0: String,
        #[arg(long, value_name = "TEXT")]
        b: String,
        #[arg(long, default_value_t = 0)]
        m: u32,
        /// Translation file holding the sequence scheme; defaults to the
        /// identity on the frame.
        #[arg(long, value_name = "FILE", requires = "scheme")]
        scheme_file: Option<PathBuf>,
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long, default_value_t = 4)]
        sub_rho: u32,
        #[arg(long, default_value_t = 4)]
        prov_rho: u32,
        #[arg(long, value_name = "FILE")]
        emit: Option<PathBuf>,
    },
    /// Check a proof file and print its statistics.
    CheckProof {
        #[arg(long, value_name = "FILE")]
        proof: PathBuf,
    },
    /// Measure the growth constants of the generated families.
    Constants {
        #[arg(long, default_value_t = 6)]
        cap: u32,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match commands::run(cli.command, OutputLimits { print: cli.max_symbols, emit: cli.max_emit_symbols }) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
