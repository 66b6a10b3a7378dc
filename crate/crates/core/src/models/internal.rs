use std::collections::BTreeMap;

use super::{all_tuples, eval, eval_with, Assignment, FiniteModel, ModelError};
use crate::fol::{Formula, Var};
use crate::translations::{slot, Translation};

/// The model a translation carves out of a target model, with the tuples
/// making up each element.
#[derive(Clone, Debug)]
pub struct InternalModel {
    pub model: FiniteModel,
    /// Member tuples of each element; the first is the representative.
    pub classes: Vec<Vec<Vec<usize>>>,
}

impl InternalModel {
    /// The element a domain tuple belongs to.
    pub fn class_of(&self, tuple: &[usize]) -> Option<usize> {
        self.classes.iter().position(|c| c.iter().any(|t| t == tuple))
    }
}

/// All parameter tuples satisfying the parameter domain.
pub fn param_tuples(model: &FiniteModel, tau: &Translation) -> Result<Vec<Vec<usize>>, ModelError> {
    let params = tau.params();
    let mut out = Vec::new();
    for t in all_tuples(model.size(), params.len()) {
        let binding: Vec<(Var, usize)> = params.iter().cloned().zip(t.iter().copied()).collect();
        if eval_with(model, tau.param_domain(), &binding)? {
            out.push(t);
        }
    }
    Ok(out)
}

fn param_binding(model: &FiniteModel, tau: &Translation, values: Option<&[usize]>) -> Result<Vec<(Var, usize)>, ModelError> {
    let values = values.unwrap_or(&[]);
    if values.len() != tau.params().len() {
        return Err(ModelError::ParamCount { expected: tau.params().len(), got: values.len() });
    }
    let binding: Vec<(Var, usize)> = tau.params().iter().cloned().zip(values.iter().copied()).collect();
    if !eval_with(model, tau.param_domain(), &binding)? {
        return Err(ModelError::ParamOutsideDomain);
    }
    Ok(binding)
}

fn bind_slots(base: &[(Var, usize)], tuples: &[&Vec<usize>]) -> Vec<(Var, usize)> {
    let mut b = base.to_vec();
    let mut j = 0;
    for t in tuples {
        for &e in t.iter() {
            b.push((slot(j), e));
            j += 1;
        }
    }
    b
}

/// Builds the internal model: tuples satisfying the domain formula, predicates
/// from their images, quotiented by the translated identity, which must be a
/// congruence.
pub fn internal_model(model: &FiniteModel, tau: &Translation, params: Option<&[usize]>) -> Result<InternalModel, ModelError> {
    let base = param_binding(model, tau, params)?;
    let m = tau.dim();
    let mut domain = Vec::new();
    for t in all_tuples(model.size(), m) {
        if eval_with(model, tau.delta(), &bind_slots(&base, &[&t]))? {
            domain.push(t);
        }
    }
    if domain.is_empty() {
        return Err(ModelError::EmptyDomain);
    }
    let d = domain.len();
    let name = |t: &[usize]| t.iter().map(|&e| model.universe()[e].as_str()).collect::<Vec<_>>().join(".");

    let (class_of, classes) = if tau.identity_is_componentwise() {
        ((0..d).collect::<Vec<_>>(), (0..d).map(|i| vec![i]).collect::<Vec<_>>())
    } else {
        let id = tau.identity_formula();
        let mut rel = vec![false; d * d];
        for i in 0..d {
            for j in 0..d {
                rel[i * d + j] = eval_with(model, &id, &bind_slots(&base, &[&domain[i], &domain[j]]))?;
            }
        }
        let show = |i: usize| format!("({})", name(&domain[i]));
        if let Some(i) = (0..d).find(|&i| !rel[i * d + i]) {
            return Err(ModelError::NotEquivalence(format!("{} is not related to itself", show(i))));
        }
        for i in 0..d {
            for j in 0..d {
                if rel[i * d + j] && !rel[j * d + i] {
                    return Err(ModelError::NotEquivalence(format!("not symmetric at {} {}", show(i), show(j))));
                }
                if !rel[i * d + j] {
                    continue;
                }
                if let Some(k) = (0..d).find(|&k| rel[j * d + k] && !rel[i * d + k]) {
                    return Err(ModelError::NotEquivalence(format!(
                        "not transitive at {} {} {}",
                        show(i),
                        show(j),
                        show(k)
                    )));
                }
            }
        }
        let mut class_of = vec![usize::MAX; d];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..d {
            if class_of[i] == usize::MAX {
                let members: Vec<usize> = (i..d).filter(|&j| rel[i * d + j]).collect();
                for &j in &members {
                    class_of[j] = classes.len();
                }
                classes.push(members);
            }
        }
        (class_of, classes)
    };

    let mut out = FiniteModel::new(classes.iter().map(|c| name(&domain[c[0]])).collect());
    let full_check = !tau.identity_is_componentwise();
    for (p, k) in tau.source.preds() {
        out.add_pred(p, k)?;
        let image = tau.pred_image(p).expect("every source predicate has an image");
        let mut value: BTreeMap<Vec<usize>, bool> = BTreeMap::new();
        let range = if full_check { d } else { classes.len() };
        for combo in all_tuples(range, k) {
            let members: Vec<usize> = if full_check { combo.clone() } else { combo.iter().map(|&c| classes[c][0]).collect() };
            let tuples: Vec<&Vec<usize>> = members.iter().map(|&i| &domain[i]).collect();
            let v = eval_with(model, image, &bind_slots(&base, &tuples))?;
            let key: Vec<usize> = members.iter().map(|&i| class_of[i]).collect();
            match value.get(&key) {
                Some(&prev) if prev != v => return Err(ModelError::NotCongruence(p.to_string())),
                Some(_) => {}
                None => {
                    value.insert(key.clone(), v);
                    if v {
                        out.insert(p, &key)?;
                    }
                }
            }
        }
    }
    let classes = classes.into_iter().map(|c| c.into_iter().map(|i| domain[i].clone()).collect()).collect();
    Ok(InternalModel { model: out, classes })
}

/// Whether the target model satisfies the translated sentence exactly when the
/// internal model satisfies the sentence.
pub fn check_fundamental(
    model: &FiniteModel,
    tau: &Translation,
    sentence: &Formula,
    params: Option<&[usize]>,
) -> Result<bool, ModelError> {
    let internal = internal_model(model, tau, params)?;
    let base = param_binding(model, tau, params)?;
    let translated = tau.apply(sentence, None)?;
    let outside = eval_with(model, &translated, &base)?;
    let inside = eval(&internal.model, sentence, &Assignment::new())?;
    Ok(outside == inside)
}
