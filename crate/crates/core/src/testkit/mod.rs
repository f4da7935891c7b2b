//! Oracles, generators and fixtures used to validate the rest of the crate.

mod fuzz;
mod oracle;
mod random;
mod simulate;
pub mod t0;

pub use fuzz::{axiom_closure_violations, fuzz_campaign, FuzzReport, Violation};
pub use oracle::{recall_oracle, recall_oracle_classes, ORACLE_MAX_DEPTH};
pub use random::{random_system, RandomParams};
pub use simulate::simulate;
