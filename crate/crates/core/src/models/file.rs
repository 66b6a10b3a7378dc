use super::{all_tuples, FiniteModel, ModelError};

fn split_tuples(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0;
    for c in s.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth -= 1;
                cur.push(c);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c if c.is_whitespace() => {}
            _ => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Reads a model: `universe a b c`, `pred P: (a,b) (b,c)` (optionally
/// `pred P/2:` to fix the arity of an empty extension) and
/// `fun f: a->b b->c c->a` or `fun g: (a,b)->c ...`.
pub fn parse_model(text: &str) -> Result<FiniteModel, ModelError> {
    let mut model: Option<FiniteModel> = None;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let syntax = |msg: String| ModelError::Syntax { line, msg };
        if let Some(rest) = l.strip_prefix("universe") {
            let names: Vec<String> = rest.split_whitespace().map(String::from).collect();
            let mut seen = std::collections::BTreeSet::new();
            if let Some(dup) = names.iter().find(|e| !seen.insert(e.as_str())) {
                return Err(syntax(format!("element `{dup}` listed twice")));
            }
            model = Some(FiniteModel::new(names));
            continue;
        }
        let m = model.as_mut().ok_or_else(|| syntax("`universe` must come first".into()))?;
        let tuple = |m: &FiniteModel, s: &str| -> Result<Vec<usize>, ModelError> {
            let inner = s.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(s);
            if inner.is_empty() {
                return Ok(Vec::new());
            }
            inner
                .split(',')
                .map(|e| m.element(e.trim()).ok_or_else(|| ModelError::UnknownElement(e.trim().to_string())))
                .collect()
        };
        if let Some(rest) = l.strip_prefix("pred ") {
            let (head, body) = rest.split_once(':').ok_or_else(|| syntax("expected `pred P: ...`".into()))?;
            let (name, arity) = match head.trim().split_once('/') {
                Some((n, a)) => (n.trim(), Some(a.trim().parse::<usize>().map_err(|_| syntax("bad arity".into()))?)),
                None => (head.trim(), None),
            };
            let tuples = split_tuples(body).iter().map(|t| tuple(m, t)).collect::<Result<Vec<_>, _>>()?;
            let arity = match (arity, tuples.first()) {
                (Some(a), _) => a,
                (None, Some(t)) => t.len(),
                (None, None) => return Err(syntax(format!("empty extension of `{name}` needs `{name}/<arity>`"))),
            };
            m.add_pred(name, arity)?;
            for t in &tuples {
                if t.len() != arity {
                    return Err(syntax(format!("tuple of length {} in `{name}`", t.len())));
                }
                m.insert(name, t)?;
            }
        } else if let Some(rest) = l.strip_prefix("fun ") {
            let (name, body) = rest.split_once(':').ok_or_else(|| syntax("expected `fun f: ...`".into()))?;
            let name = name.trim();
            let mut entries = Vec::new();
            for e in split_tuples(body) {
                let (arg, out) = e.split_once("->").ok_or_else(|| syntax(format!("expected `x->y`, found `{e}`")))?;
                let out = m.element(out).ok_or_else(|| ModelError::UnknownElement(out.to_string()))?;
                entries.push((tuple(m, arg)?, out));
            }
            let arity = entries.first().map_or(0, |(a, _)| a.len());
            let mut table = vec![usize::MAX; all_tuples(m.size(), arity).count()];
            for (arg, out) in entries {
                if arg.len() != arity {
                    return Err(syntax(format!("mixed arities in `{name}`")));
                }
                table[arg.iter().fold(0, |acc, &e| acc * m.size() + e)] = out;
            }
            m.set_fun(name, arity, table)?;
        } else {
            return Err(syntax(format!("unknown directive `{l}`")));
        }
    }
    model.ok_or(ModelError::Syntax { line: 0, msg: "missing `universe` line".into() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_spec_format() {
        let m = parse_model("universe a b c\npred P: (a,b) (b,c)\npred Q: a\npred E/1:\nfun f: a->b b->c c->a\n").unwrap();
        assert_eq!(m.size(), 3);
        assert!(m.holds("P", &[0, 1]).unwrap());
        assert!(!m.holds("P", &[1, 0]).unwrap());
        assert!(m.holds("Q", &[0]).unwrap());
        assert_eq!(m.extension("E"), Vec::<Vec<usize>>::new());
        assert_eq!(m.apply_fun("f", &[2]).unwrap(), 0);
    }

    #[test]
    fn round_trip() {
        let m = parse_model("universe a b\npred P: (a,b)\npred C: ()\nfun g: (a,a)->b (a,b)->a (b,a)->a (b,b)->b\nfun k: ()->b\n").unwrap();
        assert_eq!(parse_model(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn rejects_partial_functions_and_unknown_elements() {
        assert!(matches!(parse_model("universe a b\nfun f: a->b\n"), Err(ModelError::PartialFunction(_))));
        assert!(matches!(parse_model("universe a\npred P: z\n"), Err(ModelError::UnknownElement(_))));
    }
}
