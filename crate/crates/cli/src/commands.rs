use std::fmt::Write;

use seqlogic::arith::{c11, deep_stack, godel_encode, rosser_sentence, sub_oracle, threshold, ArithContext, ArithError};
use seqlogic::complexity::{class_member, profile, ClassId};
use seqlogic::fol::{parse_lenient, Formula, Var};
use seqlogic::models::{check_fundamental, eval, internal_model, Assignment};
use seqlogic::proof::parse_proof;
use seqlogic::satgen::{fit_linear, frame_signature, Closure, Satgen};
use seqlogic::translations::{compose, make_identity};

use crate::error::CliError;
use crate::input::{self, formula_output, OutputLimits};
use crate::Command;

pub fn run(command: Command, limits: OutputLimits) -> Result<String, CliError> {
    let mut out = String::new();
    match command {
        Command::Measure { input, sig } => {
            let sig = sig.as_deref().map(input::signature).transpose()?;
            for f in input.load(sig.as_ref())? {
                writeln!(out, "{}", profile(&f)).unwrap();
            }
        }
        Command::Classify { input, level } => {
            for f in input.load(None)? {
                let mut classes = vec![ClassId::sigma(level), ClassId::pi(level)];
                if level >= 1 {
                    classes.push(ClassId::delta(level));
                }
                let verdicts: Vec<String> = classes
                    .into_iter()
                    .map(|c| format!("{c}={}", if class_member(&f, c) { "yes" } else { "no" }))
                    .collect();
                writeln!(out, "{}", verdicts.join(" ")).unwrap();
            }
        }
        Command::Translate { translations, name, input, sigs, params } => {
            let tau = input::translation(&translations, &sigs, &name)?;
            let sig = tau.source.clone();
            let block: Vec<Var> = params.iter().map(|p| Var::from_ident(p)).collect();
            for f in input.load(Some(&sig))? {
                let t = tau.apply(&f, (!block.is_empty()).then_some(block.as_slice()))?;
                writeln!(out, "{}", formula_output(&t, None, limits)?).unwrap();
            }
        }
        Command::Compose { translations, first, second, sigs } => {
            let all = input::translations(&translations, &sigs)?;
            let find = |n: &str| {
                all.iter()
                    .find(|t| t.name == n)
                    .ok_or_else(|| CliError::Invalid(format!("{}: no translation named `{n}`", translations.display())))
            };
            out.push_str(&compose(find(&first)?, find(&second)?)?.to_text());
        }
        Command::Eval { model, input, assign } => {
            let m = input::model(&model)?;
            let mut a = Assignment::new();
            for pair in &assign {
                let (v, e) = pair
                    .split_once('=')
                    .ok_or_else(|| CliError::Usage(format!("--assign expects `var=element`, got `{pair}`")))?;
                let value = input::elements(&m, &[e.trim().to_string()])?[0];
                a.insert(Var::from_ident(v.trim()), value);
            }
            for f in input.load(None)? {
                writeln!(out, "{}", eval(&m, &f, &a)?).unwrap();
            }
        }
        Command::InternalModel { model, translations, name, sigs, params, check } => {
            let m = input::model(&model)?;
            let tau = input::translation(&translations, &sigs, &name)?;
            let values = input::elements(&m, &params)?;
            let values = (!tau.params().is_empty()).then_some(values.as_slice());
            let internal = internal_model(&m, &tau, values)?;
            out.push_str(&internal.model.to_text());
            if let Some(path) = check {
                let sentences = input::FormulaInput { formula: Some(path), expr: None }.load(Some(&tau.source))?;
                for s in sentences {
                    if !check_fundamental(&m, &tau, &s, values)? {
                        return Err(CliError::Invariant(format!("the translation of `{s}` disagrees with the internal model")));
                    }
                    writeln!(out, "# agrees: {s}").unwrap();
                }
            }
        }
        Command::Satgen { n, sig, mode, emit, report } => {
            let g = Satgen::new(&input::signature(&sig)?)?;
            let family = g.gen_sat(n, mode)?;
            let p = family.profile();
            writeln!(out, "sat_{n} {mode} {p} symbols={}", family.formula.symbol_count()).unwrap();
            writeln!(out, "{}", formula_output(&family.formula, emit.as_deref(), limits)?).unwrap();
            if let Some(path) = report {
                input::write(&path, &satgen_report(&g, n, mode)?)?;
            }
        }
        Command::Cuts { kind, n, sig, shorten, parameter_free, emit } => {
            let g = Satgen::new(&input::signature(&sig)?)?;
            let mut cut = g.gen_cut(kind, n)?;
            let closures = shorten.iter().map(|s| closure(s)).collect::<Result<Vec<_>, _>>()?;
            if !closures.is_empty() {
                cut = g.shorten_cut(&cut, &closures)?;
            }
            if parameter_free {
                cut = g.parameter_free(&cut)?;
            }
            let params: Vec<String> = cut.params.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{kind}_{n} var={} params=[{}]", cut.var, params.join(" ")).unwrap();
            writeln!(out, "{} symbols={}", cut.profile, cut.formula.symbol_count()).unwrap();
            writeln!(out, "{}", formula_output(&cut.formula, emit.as_deref(), limits)?).unwrap();
        }
        Command::Rosser { axioms, target, sub_rho, prov_rho, level, emit } => {
            let axioms = Formula::conj(input::FormulaInput { formula: Some(axioms), expr: None }.load(None)?);
            let target = parse_lenient(&target)?;
            let ctx = ArithContext::standard().with_rho(sub_rho, prov_rho)?;
            out.push_str(&deep_stack(|| rosser(&ctx, &axioms, &target, level, emit.as_deref(), limits))?);
        }
        Command::Conservative { sig, a0, b, m, scheme_file, scheme, sub_rho, prov_rho, emit } => {
            let g = Satgen::new(&input::signature(&sig)?)?;
            let scheme = match (scheme_file, scheme) {
                (Some(path), Some(name)) => input::translation(&path, &[], &name)?,
                (None, None) => make_identity(&frame_signature()),
                _ => return Err(CliError::Usage("--scheme-file and --scheme go together".into())),
            };
            let ctx = ArithContext::standard().with_rho(sub_rho, prov_rho)?;
            let ext = g.conservative_extension(&parse_lenient(&a0)?, &parse_lenient(&b)?, m, &scheme, c11(&ctx))?;
            writeln!(out, "level={} c11={}", ext.level, c11(&ctx)).unwrap();
            writeln!(out, "cut {}", ext.cut.profile).unwrap();
            writeln!(out, "sentence {} symbols={}", profile(&ext.sentence), ext.sentence.symbol_count()).unwrap();
            writeln!(out, "{}", formula_output(&ext.sentence, emit.as_deref(), limits)?).unwrap();
        }
        Command::CheckProof { proof } => {
            let p = parse_proof(&input::read(&proof)?)?;
            let s = p.stats()?;
            writeln!(out, "ok level={} steps={} max_nu={} max_rho0={}", p.level, s.step_count, s.max_nu, s.max_rho0).unwrap();
            let theorem = p.theorem.as_ref().unwrap_or(&p.steps[s.step_count - 1].sequent);
            writeln!(out, "theorem {theorem}").unwrap();
        }
        Command::Constants { cap } => {
            if !(3..=8).contains(&cap) {
                return Err(CliError::Invalid(format!("--cap must lie in 3..=8, got {cap}")));
            }
            out.push_str(&seqlogic::satgen::measure_constants(cap)?.to_string());
        }
    }
    Ok(out)
}

fn closure(name: &str) -> Result<Closure, CliError> {
    Ok(match name {
        "plus" => Closure::Plus,
        "times" => Closure::Times,
        "omega1" => Closure::Omega1,
        "down" => Closure::Down,
        _ => return Err(CliError::Usage(format!("unknown closure `{name}` (expected plus, times, omega1, down)"))),
    })
}

fn satgen_report(g: &Satgen, n: u32, mode: seqlogic::satgen::SatMode) -> Result<String, CliError> {
    let mut out = format!("# sat_k, {mode}, object signature {}\n", g.theta().name);
    writeln!(out, "{:>3} {:>5} {:>5} {:>5} {:>9}", "k", "rhoE", "rhoA", "rho0", "symbols").unwrap();
    let mut points = Vec::new();
    for k in 0..=n {
        let f = g.gen_sat(k, mode)?;
        let p = f.profile();
        writeln!(out, "{k:>3} {:>5} {:>5} {:>5} {:>9}", p.rho_e, p.rho_a, p.rho0, f.formula.symbol_count()).unwrap();
        if k >= 2 {
            points.push((k, i64::from(p.rho)));
        }
    }
    match fit_linear(&points) {
        Some(fit) => writeln!(
            out,
            "rho = {}k + {} from k = 2, max residual {}{}",
            fit.slope,
            fit.intercept,
            fit.max_residual,
            if fit.exact { " (exact)" } else { "" }
        )
        .unwrap(),
        None => writeln!(out, "too few levels from k = 2 for a fit").unwrap(),
    }
    Ok(out)
}

fn rosser(
    ctx: &ArithContext,
    axioms: &Formula,
    target: &Formula,
    level: Option<u32>,
    emit: Option<&std::path::Path>,
    limits: OutputLimits,
) -> Result<String, CliError> {
    let free: Vec<Var> = target.free_vars().into_iter().collect();
    let b = Formula::exists_many(&free, Formula::and(ctx.numbers.delta_on(&free), target.clone()));
    let level = level.unwrap_or_else(|| threshold(ctx, axioms, &b));
    let r = match rosser_sentence(axioms, target, level, ctx) {
        Err(ArithError::BudgetViolation { rho0, budget }) => {
            return Err(CliError::Invariant(format!("rho0 of the Rosser sentence is {rho0}, above the level {budget}")))
        }
        other => other?,
    };
    let mut out = String::new();
    let rep = &r.report;
    writeln!(out, "level={} threshold={} rho0={} estimate={}", rep.level, rep.threshold, rep.rho0, rep.estimate).unwrap();
    if rep.rho0 > rep.estimate {
        return Err(CliError::Invariant(format!("rho0 {} exceeds the estimate {}", rep.rho0, rep.estimate)));
    }
    if sub_oracle(&r.diagonal_code, &r.diagonal_code, ctx)? != godel_encode(&r.sentence) {
        return Err(CliError::Invariant("sub(code, code) differs from the code of the sentence".into()));
    }
    writeln!(out, "diagonal code bits={} check=ok", r.diagonal_code.bits()).unwrap();
    writeln!(out, "{}", formula_output(&r.sentence, emit, limits)?).unwrap();
    Ok(out)
}
