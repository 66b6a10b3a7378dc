use thiserror::Error;

use super::signature::is_identifier;
use super::{Formula, Signature, Term, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown symbol `{symbol}` at {line}:{col}")]
    UnknownSymbol { symbol: String, line: usize, col: usize },
    #[error("`{symbol}` expects {expected} arguments, got {got} (at {line}:{col})")]
    Arity { symbol: String, expected: usize, got: usize, line: usize, col: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Forall,
    Exists,
    TopKw,
    BotKw,
    LParen,
    RParen,
    Comma,
    Dot,
    EqSign,
    Tilde,
    AndOp,
    OrOp,
    Arrow,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::End => "end of input".to_string(),
        Tok::Forall => "`forall`".into(),
        Tok::Exists => "`exists`".into(),
        Tok::TopKw => "`top`".into(),
        Tok::BotKw => "`bot`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Dot => "`.`".into(),
        Tok::EqSign => "`=`".into(),
        Tok::Tilde => "`~`".into(),
        Tok::AndOp => "`/\\`".into(),
        Tok::OrOp => "`\\/`".into(),
        Tok::Arrow => "`->`".into(),
    }
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |p| p + 1) + 1;
    (line, col)
}

fn lex(text: &str) -> Result<Lexed, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let two = |s: &str| text[i..].starts_with(s);
        let tok = if c.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            match word {
                "forall" => Tok::Forall,
                "exists" => Tok::Exists,
                "top" => Tok::TopKw,
                "bot" => Tok::BotKw,
                _ => Tok::Ident(word.to_string()),
            }
        } else if two("/\\") {
            i += 2;
            Tok::AndOp
        } else if two("\\/") {
            i += 2;
            Tok::OrOp
        } else if two("->") {
            i += 2;
            Tok::Arrow
        } else {
            i += 1;
            match c {
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b',' => Tok::Comma,
                b'.' => Tok::Dot,
                b'=' => Tok::EqSign,
                b'~' => Tok::Tilde,
                _ => {
                    let (line, col) = line_col(text, start);
                    let ch = text[start..].chars().next().unwrap_or('?');
                    return Err(ParseError::Syntax { line, col, msg: format!("unexpected character `{ch}`") });
                }
            }
        };
        toks.push((tok, start));
    }
    toks.push((Tok::End, text.len()));
    Ok(Lexed { toks })
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sig: Option<&'a Signature>,
}

/// Parses formula text, checking symbols and arities against `sig`.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    parse_with(text, Some(sig))
}

/// Parses without a signature: `name(...)` is a predicate unless followed by `=`,
/// and bare identifiers are variables (or nullary predicates when not compared).
pub fn parse_lenient(text: &str) -> Result<Formula, ParseError> {
    parse_with(text, None)
}

fn parse_with(text: &str, sig: Option<&Signature>) -> Result<Formula, ParseError> {
    let lexed = lex(text)?;
    let mut p = Parser { text, toks: lexed.toks, pos: 0, sig };
    let f = p.formula()?;
    p.expect(Tok::End)?;
    Ok(f)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_at(&self, offset: usize, msg: String) -> ParseError {
        let (line, col) = line_col(self.text, offset);
        ParseError::Syntax { line, col, msg }
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.err_at(self.offset(), format!("expected {}, found {}", describe(&t), describe(self.peek()))))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while *self.peek() == Tok::OrOp {
            self.bump();
            let rhs = self.conjunction()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::AndOp {
            self.bump();
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Forall | Tok::Exists => {
                let universal = self.bump() == Tok::Forall;
                let at = self.offset();
                let v = match self.bump() {
                    Tok::Ident(name) => {
                        if self.is_declared_symbol(&name) {
                            return Err(self.err_at(at, format!("`{name}` is a signature symbol, not a variable")));
                        }
                        Var::from_ident(&name)
                    }
                    t => return Err(self.err_at(at, format!("expected a variable, found {}", describe(&t)))),
                };
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                Ok(if universal { Formula::forall(v, body) } else { Formula::exists(v, body) })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::TopKw => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::BotKw => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) => self.atom_or_identity(name, at),
            t => Err(self.err_at(at, format!("expected a formula, found {}", describe(&t)))),
        }
    }

    fn is_declared_symbol(&self, name: &str) -> bool {
        self.sig.is_some_and(|s| s.pred_arity(name).is_some() || s.fun_arity(name).is_some())
    }

    fn atom_or_identity(&mut self, name: String, at: usize) -> Result<Formula, ParseError> {
        let is_pred = match self.sig {
            Some(sig) => {
                if sig.pred_arity(&name).is_some() {
                    true
                } else if sig.fun_arity(&name).is_some() {
                    false
                } else if *self.peek2() == Tok::LParen {
                    let (line, col) = line_col(self.text, at);
                    return Err(ParseError::UnknownSymbol { symbol: name, line, col });
                } else {
                    false
                }
            }
            None => {
                // Decide after reading the argument list.
                let save = self.pos;
                self.bump();
                if *self.peek() == Tok::LParen {
                    self.skip_balanced()?;
                }
                let followed_by_eq = *self.peek() == Tok::EqSign;
                self.pos = save;
                !followed_by_eq
            }
        };
        if is_pred {
            self.bump();
            let args = if *self.peek() == Tok::LParen { self.arg_list()? } else { Vec::new() };
            self.check_arity(&name, args.len(), at, true)?;
            if !is_identifier(&name) {
                return Err(self.err_at(at, format!("`{name}` is not an identifier")));
            }
            return Ok(Formula::atom(&name, args));
        }
        let lhs = self.term()?;
        self.expect(Tok::EqSign)?;
        let rhs = self.term()?;
        Ok(Formula::Equals(lhs, rhs))
    }

    fn skip_balanced(&mut self) -> Result<(), ParseError> {
        let mut depth = 0usize;
        loop {
            match self.bump() {
                Tok::LParen => depth += 1,
                Tok::RParen => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(());
                    }
                }
                Tok::End => return Err(self.err_at(self.text.len(), "unbalanced parentheses".into())),
                _ => {}
            }
        }
    }

    fn check_arity(&self, name: &str, got: usize, at: usize, pred: bool) -> Result<(), ParseError> {
        let Some(sig) = self.sig else { return Ok(()) };
        let expected = if pred { sig.pred_arity(name) } else { sig.fun_arity(name) };
        match expected {
            Some(k) if k == got => Ok(()),
            Some(k) => {
                let (line, col) = line_col(self.text, at);
                Err(ParseError::Arity { symbol: name.to_string(), expected: k, got, line, col })
            }
            None => {
                let (line, col) = line_col(self.text, at);
                Err(ParseError::UnknownSymbol { symbol: name.to_string(), line, col })
            }
        }
    }

    fn arg_list(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if *self.peek() == Tok::RParen {
            self.bump();
            return Ok(args);
        }
        loop {
            args.push(self.term()?);
            match self.bump() {
                Tok::Comma => continue,
                Tok::RParen => return Ok(args),
                t => {
                    let at = self.toks[self.pos.saturating_sub(1)].1;
                    return Err(self.err_at(at, format!("expected `,` or `)`, found {}", describe(&t))));
                }
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let at = self.offset();
        let name = match self.bump() {
            Tok::Ident(name) => name,
            t => return Err(self.err_at(at, format!("expected a term, found {}", describe(&t)))),
        };
        if let Some(sig) = self.sig {
            if sig.pred_arity(&name).is_some() {
                return Err(self.err_at(at, format!("predicate `{name}` used as a term")));
            }
            if let Some(k) = sig.fun_arity(&name) {
                let args = if *self.peek() == Tok::LParen { self.arg_list()? } else { Vec::new() };
                self.check_arity(&name, args.len(), at, false)?;
                let _ = k;
                return Ok(Term::app(&name, args));
            }
            if *self.peek() == Tok::LParen {
                let (line, col) = line_col(self.text, at);
                return Err(ParseError::UnknownSymbol { symbol: name, line, col });
            }
            return Ok(Term::Var(Var::from_ident(&name)));
        }
        if *self.peek() == Tok::LParen {
            let args = self.arg_list()?;
            return Ok(Term::app(&name, args));
        }
        Ok(Term::Var(Var::from_ident(&name)))
    }
}
