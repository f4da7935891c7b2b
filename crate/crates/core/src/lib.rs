//! Navigation strategies over finite transition systems with imperfect
//! information: witness checking, synthesis for memoryless and recall
//! strategies, the two matching axiom systems with proof objects, and the
//! canonical models that connect derivability to truth.

pub mod canonical;
pub mod cli;
pub mod error;
pub mod formula;
pub mod navigation;
pub mod proof;
pub mod system;
pub mod testkit;

pub use error::{Error, Result};
pub use formula::{format_formula, parse_formula, Formula, NavStatement};
pub use navigation::{Budget, Kind};
pub use proof::{AxiomSystem, Derivation};
pub use system::{ClassSet, History, TransitionSystem, ViewSet};
