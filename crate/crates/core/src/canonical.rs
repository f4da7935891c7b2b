//! Canonical transition systems built from a finite set of atomic
//! hypotheses, one per axiom system.
//!
//! Naming: each view `v` is a state `v` in its own class. The sink is
//! `@sink`. The instruction for a pair `(A, B)` is named `a1+a2~b1+b2`, and
//! its wormhole state (memoryless only) is `@w:` followed by that name.
//! View names therefore may not contain `@`, `+` or `~`.

use crate::error::{Error, Result};
use crate::formula::NavStatement;
use crate::proof::{derives, AxiomSystem};
use crate::system::{SystemBuilder, TransitionSystem, ViewSet};

pub const SINK: &str = "@sink";
/// Instruction added when no pair qualifies; it sends every state to the sink.
pub const PAD_INSTRUCTION: &str = "@pad";
pub const RECALL_MAX_VIEWS: usize = 4;
pub const MEMORYLESS_MAX_VIEWS: usize = 3;

const RESERVED: [char; 3] = ['@', '+', '~'];

pub fn instruction_name(a: &ViewSet, b: &ViewSet) -> String {
    let join = |s: &ViewSet| s.iter().collect::<Vec<_>>().join("+");
    format!("{}~{}", join(a), join(b))
}

pub fn wormhole_name(a: &ViewSet, b: &ViewSet) -> String {
    format!("@w:{}", instruction_name(a, b))
}

fn check_inputs(sigma: &[NavStatement], universe: &ViewSet, bound: usize) -> Result<Vec<ViewSet>> {
    if universe.len() > bound {
        return Err(Error::BudgetExceeded {
            what: "canonical model view universe",
            needed: universe.len() as u128,
            bound: bound as u128,
        });
    }
    if let Some(bad) = universe.iter().find(|v| v.contains(RESERVED)) {
        return Err(Error::InvalidIdentifier(bad.to_string()));
    }
    for h in sigma {
        if let Some(v) = h.lhs.iter().chain(h.rhs.iter()).find(|v| !universe.contains(v)) {
            return Err(Error::UnknownView(v.to_string()));
        }
    }
    let names: Vec<&str> = universe.iter().collect();
    Ok((1usize..1 << names.len())
        .map(|m| {
            ViewSet::new(
                names
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| m >> k & 1 == 1)
                    .map(|(_, n)| *n),
            )
            .expect("nonempty mask")
        })
        .collect())
}

fn base(name: &str, universe: &ViewSet) -> SystemBuilder {
    let mut b = SystemBuilder::new(name);
    for v in universe.iter() {
        b.state(v);
    }
    b.state(SINK);
    for v in universe.iter() {
        b.view(v, v);
    }
    b
}

fn derivable_pairs(system: AxiomSystem, sigma: &[NavStatement], subsets: &[ViewSet]) -> Vec<(ViewSet, ViewSet)> {
    let mut out = Vec::new();
    for a in subsets {
        for b in subsets {
            if derives(system, sigma, &NavStatement::new(a.clone(), b.clone())) {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// States `V ∪ {@sink}`, all observable; one instruction per derivable
/// pair `(A, B)`, sending members of `A` onto `B` and everything else to
/// the sink.
pub fn build_recall_canonical(sigma: &[NavStatement], universe: &ViewSet) -> Result<TransitionSystem> {
    let subsets = check_inputs(sigma, universe, RECALL_MAX_VIEWS)?;
    let pairs = derivable_pairs(AxiomSystem::Recall, sigma, &subsets);
    let mut b = base("recall_canonical", universe);
    for (a, t) in &pairs {
        let i = instruction_name(a, t);
        b.instruction(&i);
        for v in universe.iter() {
            if a.contains(v) {
                b.edge(v, &i, t.iter());
            } else {
                b.edge(v, &i, [SINK]);
            }
        }
        b.edge(SINK, &i, [SINK]);
    }
    b.build()
}

/// Like the recall model, restricted to disjoint derivable pairs, with
/// each pair routed through its own wormhole. All wormholes share one
/// observation class, so a memoryless strategy picks a single exit for all
/// of them.
pub fn build_memoryless_canonical(sigma: &[NavStatement], universe: &ViewSet) -> Result<TransitionSystem> {
    let subsets = check_inputs(sigma, universe, MEMORYLESS_MAX_VIEWS)?;
    let pairs: Vec<_> = derivable_pairs(AxiomSystem::Memoryless, sigma, &subsets)
        .into_iter()
        .filter(|(a, b)| a.iter().all(|v| !b.contains(v)))
        .collect();
    let mut b = base("memoryless_canonical", universe);
    let holes: Vec<String> = pairs.iter().map(|(a, t)| wormhole_name(a, t)).collect();
    for w in &holes {
        b.state(w);
    }
    if !holes.is_empty() {
        b.obs(holes.iter());
    }
    for (k, (a, t)) in pairs.iter().enumerate() {
        let i = instruction_name(a, t);
        b.instruction(&i);
        for v in universe.iter() {
            if a.contains(v) {
                b.edge(v, &i, [holes[k].as_str()]);
            } else {
                b.edge(v, &i, [SINK]);
            }
        }
        for (j, w) in holes.iter().enumerate() {
            if j == k {
                b.edge(w, &i, t.iter());
            } else {
                b.edge(w, &i, [SINK]);
            }
        }
        b.edge(SINK, &i, [SINK]);
    }
    if pairs.is_empty() {
        b.instruction(PAD_INSTRUCTION);
        for v in universe.iter().chain([SINK]) {
            b.edge(v, PAD_INSTRUCTION, [SINK]);
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::navigation::{evaluate_atom, Budget, Kind};

    fn atom(text: &str) -> NavStatement {
        NavStatement::parse(text).unwrap()
    }

    fn vs(names: &[&str]) -> ViewSet {
        ViewSet::new(names.iter().copied()).unwrap()
    }

    #[test]
    fn recall_single_view_has_only_reflexive_instruction() {
        let t = build_recall_canonical(&[], &vs(&["x"])).unwrap();
        assert_eq!(t.instruction_names(), ["x~x"]);
        assert_eq!(t.num_states(), 2);
    }

    #[test]
    fn sink_absorbs_in_both_models() {
        let sigma = [atom("{x}|>{y}")];
        let v = vs(&["x", "y"]);
        for t in [
            build_recall_canonical(&sigma, &v).unwrap(),
            build_memoryless_canonical(&sigma, &v).unwrap(),
        ] {
            let sink = t.state_id(SINK).unwrap();
            for i in 0..t.num_instructions() {
                assert_eq!(t.successors(sink, i), [sink]);
            }
        }
    }

    #[test]
    fn hypothesis_holds_in_its_model() {
        let sigma = [atom("{x}|>{y}")];
        let v = vs(&["x", "y"]);
        let budget = Budget::default();
        let r = build_recall_canonical(&sigma, &v).unwrap();
        assert!(evaluate_atom(&r, &sigma[0], Kind::Recall, &budget).unwrap());
        let m = build_memoryless_canonical(&sigma, &v).unwrap();
        assert!(evaluate_atom(&m, &sigma[0], Kind::Memoryless, &budget).unwrap());
        assert!(!evaluate_atom(&m, &atom("{y}|>{x}"), Kind::Memoryless, &budget).unwrap());
    }

    #[test]
    fn wormholes_share_a_class_and_leave_only_by_their_own_instruction() {
        let sigma = [atom("{x}|>{y}"), atom("{y}|>{x}")];
        let t = build_memoryless_canonical(&sigma, &vs(&["x", "y"])).unwrap();
        let xy = t.state_id("@w:x~y").unwrap();
        let yx = t.state_id("@w:y~x").unwrap();
        assert_eq!(t.class_index(xy), t.class_index(yx));
        let i = t.instruction_id("y~x").unwrap();
        assert_eq!(t.successors(xy, i), [t.state_id(SINK).unwrap()]);
        assert_eq!(t.successors(yx, i), [t.state_id("x").unwrap()]);
    }

    #[test]
    fn padding_when_no_disjoint_pair_is_derivable() {
        let t = build_memoryless_canonical(&[], &vs(&["x", "y"])).unwrap();
        assert_eq!(t.instruction_names(), [PAD_INSTRUCTION]);
        let budget = Budget::default();
        assert!(!evaluate_atom(&t, &atom("{x}|>{y}"), Kind::Memoryless, &budget).unwrap());
        assert!(evaluate_atom(&t, &atom("{x}|>{x,y}"), Kind::Memoryless, &budget).unwrap());
    }

    #[test]
    fn input_errors() {
        assert!(matches!(
            build_memoryless_canonical(&[], &vs(&["a", "b", "c", "d"])),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            build_recall_canonical(&[], &vs(&["a", "b", "c", "d", "e"])),
            Err(Error::BudgetExceeded { .. })
        ));
        assert_eq!(
            build_recall_canonical(&[atom("{q}|>{x}")], &vs(&["x"])).unwrap_err(),
            Error::UnknownView("q".into())
        );
        assert!(matches!(
            build_recall_canonical(&[], &vs(&["a+b"])),
            Err(Error::InvalidIdentifier(_))
        ));
    }
}
