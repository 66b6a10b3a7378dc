use super::{all_tuples, FiniteModel};

/// Occurrence counts of an element per predicate and argument position; an
/// isomorphism must preserve them.
fn profile(m: &FiniteModel) -> Vec<Vec<usize>> {
    let mut prof = vec![Vec::new(); m.size()];
    for (name, _) in m.preds() {
        let arity = m.pred_arity(name).unwrap_or(0);
        let mut counts = vec![vec![0usize; arity]; m.size()];
        for t in m.extension(name) {
            for (pos, &e) in t.iter().enumerate() {
                counts[e][pos] += 1;
            }
        }
        for (e, c) in counts.into_iter().enumerate() {
            prof[e].extend(c);
        }
    }
    prof
}

struct Search<'a> {
    a: &'a FiniteModel,
    b: &'a FiniteModel,
    preds: Vec<(String, usize)>,
    prof_a: Vec<Vec<usize>>,
    prof_b: Vec<Vec<usize>>,
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    /// Checks every tuple over the first `n + 1` mapped elements that uses element `n`.
    fn consistent(&self, n: usize) -> bool {
        for (name, arity) in &self.preds {
            for t in all_tuples(n + 1, *arity) {
                if !t.contains(&n) {
                    continue;
                }
                let image: Vec<usize> = t.iter().map(|&e| self.map[e]).collect();
                if self.a.holds(name, &t).ok() != self.b.holds(name, &image).ok() {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, n: usize) -> bool {
        if n == self.a.size() {
            return true;
        }
        for cand in 0..self.b.size() {
            if self.used[cand] || self.prof_a[n] != self.prof_b[cand] {
                continue;
            }
            self.map[n] = cand;
            self.used[cand] = true;
            if self.consistent(n) && self.run(n + 1) {
                return true;
            }
            self.used[cand] = false;
        }
        false
    }
}

/// A bijection `a -> b` preserving every predicate, found by backtracking.
/// Functions are ignored.
pub fn find_isomorphism(a: &FiniteModel, b: &FiniteModel) -> Option<Vec<usize>> {
    if a.size() != b.size() || !a.preds().eq(b.preds()) {
        return None;
    }
    let preds: Vec<(String, usize)> = a.preds().map(|(n, k)| (n.to_string(), k)).collect();
    let pa = profile(a);
    let pb = profile(b);
    let mut sa = pa.clone();
    let mut sb = pb.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return None;
    }
    let mut s = Search {
        a,
        b,
        preds,
        prof_a: pa,
        prof_b: pb,
        map: vec![0; a.size()],
        used: vec![false; b.size()],
    };
    s.run(0).then_some(s.map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::parse_model;

    #[test]
    fn finds_rotation() {
        let a = parse_model("universe a b c\npred R: (a,b) (b,c)\n").unwrap();
        let b = parse_model("universe x y z\npred R: (z,x) (x,y)\n").unwrap();
        let f = find_isomorphism(&a, &b).unwrap();
        assert_eq!(f, vec![2, 0, 1]);
    }

    #[test]
    fn rejects_non_isomorphic() {
        let a = parse_model("universe a b c\npred R: (a,b) (b,c)\n").unwrap();
        let b = parse_model("universe a b c\npred R: (a,b) (a,c)\n").unwrap();
        assert!(find_isomorphism(&a, &b).is_none());
    }
}
