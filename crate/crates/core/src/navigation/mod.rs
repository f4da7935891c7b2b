//! Navigability under memoryless strategies and recall strategies.

mod check;
mod strategy;
mod synth;
mod table;

use std::fmt;
use std::str::FromStr;

pub use check::{check_memoryless_witness, check_recall_witness};
pub(crate) use check::{memoryless_visits, recall_visits};
pub use strategy::{MemoryId, MemorylessStrategy, RecallMachine, Strategy};
pub(crate) use synth::check_belief_budget;
pub use synth::{
    belief_count, compose_recall, compose_recall_classes, synth_memoryless, synth_memoryless_classes, synth_recall,
    synth_recall_classes,
};
pub use table::{navigability_table, Cell, NavigabilityTable};

use crate::error::{Error, Result};
use crate::formula::{Formula, NavStatement};
use crate::system::{ClassSet, TransitionSystem};

/// Which strategies the agent may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Memoryless,
    Recall,
}

impl Kind {
    pub const ALL: [Kind; 2] = [Kind::Memoryless, Kind::Recall];
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Memoryless => "memoryless",
            Kind::Recall => "recall",
        })
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "memoryless" => Ok(Kind::Memoryless),
            "recall" => Ok(Kind::Recall),
            other => Err(Error::InvalidParams(format!(
                "unknown kind `{other}` (expected memoryless or recall)"
            ))),
        }
    }
}

/// Search bounds. Exceeding one is an error, never a silent answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Upper bound on `|I|^{#classes}`.
    pub strategies: u128,
    /// Upper bound on the number of nonempty single-class beliefs.
    pub beliefs: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            strategies: 1 << 20,
            beliefs: 1 << 20,
        }
    }
}

/// Whether a strategy of the given kind navigates between class sets.
pub fn navigable_classes(
    sys: &TransitionSystem,
    from: &ClassSet,
    to: &ClassSet,
    kind: Kind,
    budget: &Budget,
) -> Result<bool> {
    Ok(match kind {
        Kind::Memoryless => synth_memoryless_classes(sys, from, to, budget)?.is_some(),
        Kind::Recall => synth_recall_classes(sys, from, to, budget)?.is_some(),
    })
}

/// `T ⊨ A ▷ B` for one atom.
pub fn evaluate_atom(sys: &TransitionSystem, atom: &NavStatement, kind: Kind, budget: &Budget) -> Result<bool> {
    let a = sys.star_set(&atom.lhs)?;
    let b = sys.star_set(&atom.rhs)?;
    navigable_classes(sys, &a, &b, kind, budget)
}

/// Classical evaluation; atoms by synthesis.
pub fn evaluate(sys: &TransitionSystem, f: &Formula, kind: Kind, budget: &Budget) -> Result<bool> {
    f.eval_with(&mut |atom| evaluate_atom(sys, atom, kind, budget))
}
