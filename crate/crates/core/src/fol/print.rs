use std::fmt::{self, Write};

use super::{Formula, Term};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(name, args) if args.is_empty() => write!(f, "{name}"),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_char(',')?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_char(')')
            }
        }
    }
}

/// True when the printed form ends in a quantifier whose scope would swallow
/// whatever follows it.
fn open_right(f: &Formula) -> bool {
    match f {
        Formula::Forall(..) | Formula::Exists(..) => true,
        Formula::Not(a) => open_right(a),
        _ => false,
    }
}

fn write_formula(out: &mut impl Write, f: &Formula) -> fmt::Result {
    match f {
        Formula::Top => out.write_str("top"),
        Formula::Bot => out.write_str("bot"),
        Formula::Atom(p, args) => {
            out.write_str(p)?;
            if !args.is_empty() {
                out.write_char('(')?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.write_char(',')?;
                    }
                    write!(out, "{a}")?;
                }
                out.write_char(')')?;
            }
            Ok(())
        }
        Formula::Equals(a, b) => write!(out, "{a} = {b}"),
        Formula::Not(a) => {
            out.write_char('~')?;
            write_formula(out, a)
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let op = match f {
                Formula::And(..) => " /\\ ",
                Formula::Or(..) => " \\/ ",
                _ => " -> ",
            };
            out.write_char('(')?;
            if open_right(a) {
                out.write_char('(')?;
                write_formula(out, a)?;
                out.write_char(')')?;
            } else {
                write_formula(out, a)?;
            }
            out.write_str(op)?;
            write_formula(out, b)?;
            out.write_char(')')
        }
        Formula::Forall(v, a) => {
            write!(out, "forall {v}. ")?;
            write_formula(out, a)
        }
        Formula::Exists(v, a) => {
            write!(out, "exists {v}. ")?;
            write_formula(out, a)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self)
    }
}
