//! Per-traversal caches for subformulas referenced from several places.
//! Generated formulas reuse one `Arc` for every occurrence of a large
//! component, so a traversal that caches those nodes stays linear in the
//! number of distinct nodes rather than in the size of the unfolded tree.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use super::{Formula, Var};

pub struct SharedMemo<T> {
    map: HashMap<*const Formula, T>,
}

impl<T> Default for SharedMemo<T> {
    fn default() -> Self {
        SharedMemo { map: HashMap::new() }
    }
}

/// Whether `node` is referenced from more than one place.
pub fn is_shared(node: &Arc<Formula>) -> bool {
    Arc::strong_count(node) > 1
}

impl<T: Clone> SharedMemo<T> {
    pub fn new() -> Self {
        Self::default()
    }

    /// `compute(node)`, cached when the node is shared.
    pub fn get_or(&mut self, node: &Arc<Formula>, compute: impl FnOnce(&mut Self) -> T) -> T {
        if !is_shared(node) {
            return compute(self);
        }
        let key = Arc::as_ptr(node);
        if let Some(v) = self.map.get(&key) {
            return v.clone();
        }
        let v = compute(self);
        self.map.insert(key, v.clone());
        v
    }
}

/// Addresses of shared nodes already seen, for traversals whose result does
/// not depend on how often a node occurs.
#[derive(Default)]
pub struct Seen(HashSet<*const Formula>);

impl Seen {
    /// True the first time a shared node is offered, and always for unshared ones.
    pub fn first_visit(&mut self, node: &Arc<Formula>) -> bool {
        !is_shared(node) || self.0.insert(Arc::as_ptr(node))
    }
}

pub type FreeMemo = SharedMemo<Arc<BTreeSet<Var>>>;

/// Free variables of `f`, reusing `memo` for shared nodes.
pub fn free_vars_with(f: &Formula, memo: &mut FreeMemo) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    super::subst::collect_free(f, &mut Vec::new(), &mut out, memo);
    out
}

/// Free variables of an `Arc` node, cached if it is shared.
pub fn node_free_vars(node: &Arc<Formula>, memo: &mut FreeMemo) -> Arc<BTreeSet<Var>> {
    memo.get_or(node, |m| Arc::new(free_vars_with(node, m)))
}
