use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::navigation::{belief_count, check_belief_budget, Budget};
use crate::system::{ClassId, ClassSet, StateId, TransitionSystem, ViewSet};

/// Deepest observation-history tree the oracle will expand.
pub const ORACLE_MAX_DEPTH: u128 = 4096;

/// Recall navigability by AND-OR search over observation-history trees.
///
/// OR over instructions, AND over the classes that may be observed next,
/// up to depth `Σ_c (2^|c| - 1)`. Subtrees are memoized on the set of
/// possible current states and the remaining depth. Shares no code with
/// the synthesizer.
pub fn recall_oracle_classes(sys: &TransitionSystem, from: &ClassSet, to: &ClassSet, budget: &Budget) -> Result<bool> {
    check_belief_budget(sys, budget)?;
    let depth = belief_count(sys);
    if depth > ORACLE_MAX_DEPTH {
        return Err(Error::BudgetExceeded {
            what: "oracle search depth",
            needed: depth,
            bound: ORACLE_MAX_DEPTH,
        });
    }
    let mut search = Search {
        sys,
        to,
        memo: HashMap::new(),
    };
    Ok(from.iter().all(|&c| {
        let knowledge: Vec<StateId> = sys.class_members(c).to_vec();
        search.wins(&knowledge, depth as u32)
    }))
}

pub fn recall_oracle(sys: &TransitionSystem, from: &ViewSet, to: &ViewSet, budget: &Budget) -> Result<bool> {
    let (a, b) = (sys.star_set(from)?, sys.star_set(to)?);
    recall_oracle_classes(sys, &a, &b, budget)
}

struct Search<'a> {
    sys: &'a TransitionSystem,
    to: &'a ClassSet,
    memo: HashMap<(Vec<StateId>, u32), bool>,
}

impl Search<'_> {
    /// `possible` is the sorted set of states consistent with the
    /// observations so far; all lie in one class.
    fn wins(&mut self, possible: &[StateId], depth: u32) -> bool {
        if self.to.contains(&self.sys.class_index(possible[0])) {
            return true;
        }
        if depth == 0 {
            return false;
        }
        let key = (possible.to_vec(), depth);
        if let Some(&known) = self.memo.get(&key) {
            return known;
        }
        let mut result = false;
        for i in 0..self.sys.num_instructions() {
            let mut by_class: BTreeMap<ClassId, BTreeSet<StateId>> = BTreeMap::new();
            for &w in possible {
                for &v in self.sys.successors(w, i) {
                    by_class.entry(self.sys.class_index(v)).or_default().insert(v);
                }
            }
            let all = by_class.values().all(|next| {
                let next: Vec<StateId> = next.iter().copied().collect();
                self.wins(&next, depth - 1)
            });
            if all {
                result = true;
                break;
            }
        }
        self.memo.insert(key, result);
        result
    }
}
