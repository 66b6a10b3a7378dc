//! Gödel numbering by prefix token sequences and Cantor pairing.
//!
//! Token tags, in fixed order:
//!
//! | tag | token | followed by |
//! |-----|-------|-------------|
//! | 0 | `top` | |
//! | 1 | `bot` | |
//! | 2 | `~` | formula |
//! | 3 | `/\` | two formulas |
//! | 4 | `\/` | two formulas |
//! | 5 | `->` | two formulas |
//! | 6 | `forall` | name, index, formula |
//! | 7 | `exists` | name, index, formula |
//! | 8 | atom | name, arity, terms |
//! | 9 | `=` | two terms |
//! | 10 | variable | name, index |
//! | 11 | application | name, arity, terms |
//!
//! A name is its byte length followed by one token per UTF-8 byte, which
//! keeps every token small. A
//! sequence `t_1 .. t_k` is coded as `pair(k, tree)` where `tree` pairs the
//! left and right halves recursively, so code length grows linearly with the
//! token count. `encode(top) = pair(1, 0) = 1`.

use std::fmt;
use std::sync::Arc;

use malachite_base::num::arithmetic::traits::{FloorSqrt, Square};
use malachite_base::num::basic::traits::{One, Zero};
use malachite_base::num::logic::traits::SignificantBits;
use malachite_nz::natural::Natural;

use super::ArithError;
use crate::fol::{Formula, Term, Var};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GodelCode(pub Natural);

impl fmt::Display for GodelCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl GodelCode {
    pub fn bits(&self) -> u64 {
        self.0.significant_bits()
    }
}

/// Cantor pairing `(a+b)(a+b+1)/2 + b`.
pub fn pair(a: &Natural, b: &Natural) -> Natural {
    let s = a + b;
    (((&s).square() + &s) >> 1u32) + b
}

pub fn unpair(z: &Natural) -> (Natural, Natural) {
    let w = (((z << 3u32) + Natural::ONE).floor_sqrt() - Natural::ONE) >> 1u32;
    let t = (&w * (&w + Natural::ONE)) >> 1u32;
    let b = z - t;
    let a = w - &b;
    (a, b)
}

fn push_name(name: &str, out: &mut Vec<Natural>) {
    out.push(Natural::from(name.len()));
    out.extend(name.bytes().map(Natural::from));
}

fn push_term(t: &Term, out: &mut Vec<Natural>) {
    match t {
        Term::Var(v) => {
            out.push(Natural::from(10u32));
            push_name(&v.name, out);
            out.push(Natural::from(v.index));
        }
        Term::App(f, args) => {
            out.push(Natural::from(11u32));
            push_name(f, out);
            out.push(Natural::from(args.len()));
            args.iter().for_each(|a| push_term(a, out));
        }
    }
}

/// The token sequence of a formula.
pub fn tokens(f: &Formula) -> Vec<Natural> {
    let mut out = Vec::new();
    push_formula(f, &mut out);
    out
}

fn push_formula(f: &Formula, out: &mut Vec<Natural>) {
    match f {
        Formula::Top => out.push(Natural::ZERO),
        Formula::Bot => out.push(Natural::ONE),
        Formula::Not(a) => {
            out.push(Natural::from(2u32));
            push_formula(a, out);
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let tag: u32 = match f {
                Formula::And(..) => 3,
                Formula::Or(..) => 4,
                _ => 5,
            };
            out.push(Natural::from(tag));
            push_formula(a, out);
            push_formula(b, out);
        }
        Formula::Forall(v, a) | Formula::Exists(v, a) => {
            out.push(Natural::from(if matches!(f, Formula::Forall(..)) { 6u32 } else { 7u32 }));
            push_name(&v.name, out);
            out.push(Natural::from(v.index));
            push_formula(a, out);
        }
        Formula::Atom(p, args) => {
            out.push(8u32.into());
            push_name(p, out);
            out.push(Natural::from(args.len()));
            args.iter().for_each(|a| push_term(a, out));
        }
        Formula::Equals(a, b) => {
            out.push(9u32.into());
            push_term(a, out);
            push_term(b, out);
        }
    }
}

fn tree(xs: &[Natural]) -> Natural {
    match xs.len() {
        0 => Natural::ZERO,
        1 => xs[0].clone(),
        n => pair(&tree(&xs[..n / 2]), &tree(&xs[n / 2..])),
    }
}

fn untree(z: Natural, len: usize, out: &mut Vec<Natural>) {
    match len {
        0 => {}
        1 => out.push(z),
        n => {
            let (a, b) = unpair(&z);
            untree(a, n / 2, out);
            untree(b, n - n / 2, out);
        }
    }
}

pub fn encode_tokens(xs: &[Natural]) -> Natural {
    pair(&Natural::from(xs.len()), &tree(xs))
}

pub fn godel_encode(f: &Formula) -> GodelCode {
    GodelCode(encode_tokens(&tokens(f)))
}

struct Reader {
    toks: Vec<Natural>,
    pos: usize,
}

impl Reader {
    fn next(&mut self) -> Result<&Natural, ArithError> {
        let t = self.toks.get(self.pos).ok_or_else(|| ArithError::InvalidCode("token sequence ends early".into()))?;
        self.pos += 1;
        Ok(t)
    }

    fn small(&mut self, what: &str) -> Result<u32, ArithError> {
        u32::try_from(self.next()?).ok().ok_or_else(|| ArithError::InvalidCode(format!("{what} out of range")))
    }

    fn name(&mut self) -> Result<Arc<str>, ArithError> {
        let len = self.small("name length")? as usize;
        if len == 0 || len > self.toks.len() {
            return Err(ArithError::InvalidCode("bad name length".into()));
        }
        let bytes = (0..len)
            .map(|_| u8::try_from(self.next()?).ok().ok_or_else(|| ArithError::InvalidCode("name byte out of range".into())))
            .collect::<Result<Vec<u8>, _>>()?;
        let s = String::from_utf8(bytes).map_err(|_| ArithError::InvalidCode("name is not UTF-8".into()))?;
        Ok(Arc::from(s.as_str()))
    }

    fn args(&mut self) -> Result<Vec<Term>, ArithError> {
        let k = self.small("arity")? as usize;
        if k > self.toks.len() {
            return Err(ArithError::InvalidCode("arity exceeds code length".into()));
        }
        (0..k).map(|_| self.term()).collect()
    }

    fn term(&mut self) -> Result<Term, ArithError> {
        match self.small("tag")? {
            10 => {
                let name = self.name()?;
                let index = self.small("index")?;
                Ok(Term::Var(Var { name, index }))
            }
            11 => {
                let name = self.name()?;
                Ok(Term::App(name, self.args()?))
            }
            t => Err(ArithError::InvalidCode(format!("tag {t} where a term was expected"))),
        }
    }

    fn formula(&mut self) -> Result<Formula, ArithError> {
        Ok(match self.small("tag")? {
            0 => Formula::Top,
            1 => Formula::Bot,
            2 => Formula::not(self.formula()?),
            3 => Formula::and(self.formula()?, self.formula()?),
            4 => Formula::or(self.formula()?, self.formula()?),
            5 => Formula::implies(self.formula()?, self.formula()?),
            tag @ (6 | 7) => {
                let name = self.name()?;
                let index = self.small("index")?;
                let v = Var { name, index };
                let body = self.formula()?;
                if tag == 6 {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                }
            }
            8 => {
                let name = self.name()?;
                Formula::Atom(name, self.args()?)
            }
            9 => Formula::Equals(self.term()?, self.term()?),
            t => return Err(ArithError::InvalidCode(format!("unknown tag {t}"))),
        })
    }
}

pub fn godel_decode(code: &GodelCode) -> Result<Formula, ArithError> {
    let (len, t) = unpair(&code.0);
    let len = usize::try_from(&len)
        .ok()
        .filter(|&l| l >= 1 && (l as u64) <= 8 * code.bits() + 8)
        .ok_or_else(|| ArithError::InvalidCode("implausible token count".into()))?;
    let mut toks = Vec::with_capacity(len);
    untree(t, len, &mut toks);
    let mut r = Reader { toks, pos: 0 };
    let f = r.formula()?;
    if r.pos != r.toks.len() {
        return Err(ArithError::InvalidCode("trailing tokens".into()));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_lenient;
    use malachite_base::num::arithmetic::traits::Pow;

    #[test]
    fn pairing_inverts() {
        for a in 0u32..30 {
            for b in 0u32..30 {
                let z = pair(&Natural::from(a), &Natural::from(b));
                assert_eq!(unpair(&z), (Natural::from(a), Natural::from(b)));
            }
        }
        let big = Natural::from(3u32).pow(200);
        let seven = Natural::from(7u32);
        assert_eq!(unpair(&pair(&big, &(&big + &seven))), (big.clone(), big + seven));
    }

    #[test]
    fn top_is_one() {
        assert_eq!(godel_encode(&Formula::Top).0, Natural::ONE);
        assert_eq!(godel_decode(&GodelCode(Natural::ONE)).unwrap(), Formula::Top);
    }

    #[test]
    fn round_trip_keeps_names() {
        for s in ["forall x_3. (P(x_3,y) -> exists z. Q(f(z,c)))", "~(a = b \\/ bot)", "Sub(l,l,z)"] {
            let f = parse_lenient(s).unwrap();
            assert_eq!(godel_decode(&godel_encode(&f)).unwrap(), f);
        }
    }

    #[test]
    fn rejects_garbage() {
        // pair(2, pair(0, 0)) = tokens [top, top]
        let code = GodelCode(pair(&Natural::from(2u32), &Natural::ZERO));
        assert!(godel_decode(&code).is_err());
        let code = GodelCode(pair(&Natural::from(1u32), &Natural::from(99u32)));
        assert!(godel_decode(&code).is_err());
    }

    #[test]
    fn code_length_is_linear() {
        // every token fits in a byte, and each tree level at most doubles the width
        let mut f = parse_lenient("P(x)").unwrap();
        for _ in 0..10 {
            f = Formula::and(f.clone(), Formula::not(f));
            let len = tokens(&f).len() as u64;
            let bits = godel_encode(&f).bits();
            assert!(bits <= 20 * len + 64, "{bits} bits for {len} tokens");
        }
    }
}
