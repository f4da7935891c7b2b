use std::collections::BTreeMap;

use navlogic::system::{histories_indistinguishable, is_valid_history, truncate_history, InstrId};
use navlogic::testkit::{random_system, RandomParams};
use navlogic::{History, TransitionSystem, ViewSet};
use proptest::prelude::*;

fn small_params() -> RandomParams {
    RandomParams {
        states: (1, 5),
        instructions: (1, 2),
        max_classes: 3,
        max_class_size: 3,
        branching: (1, 2),
    }
}

/// All histories with at most `max_len` transitions, grouped by their
/// instruction sequence.
fn histories_by_instructions(sys: &TransitionSystem, max_len: usize) -> BTreeMap<Vec<InstrId>, Vec<History>> {
    let mut out: BTreeMap<Vec<InstrId>, Vec<History>> = BTreeMap::new();
    let mut frontier: Vec<History> = (0..sys.num_states()).map(History::new).collect();
    for len in 0..=max_len {
        for h in &frontier {
            out.entry(h.steps.iter().map(|s| s.0).collect())
                .or_default()
                .push(h.clone());
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::new();
        for h in &frontier {
            for i in 0..sys.num_instructions() {
                for &t in sys.successors(h.head(), i) {
                    let mut g = h.clone();
                    g.push(i, t);
                    next.push(g);
                }
            }
        }
        frontier = next;
    }
    out
}

fn class_sequence(sys: &TransitionSystem, h: &History) -> Vec<usize> {
    h.states().map(|s| sys.class_index(s)).collect()
}

#[test]
fn indistinguishability_is_an_equivalence_on_short_histories() {
    for seed in 0..15 {
        let sys = random_system(seed, &small_params()).unwrap();
        for group in histories_by_instructions(&sys, 2).values() {
            for a in group {
                assert!(histories_indistinguishable(&sys, a, a).unwrap());
                for b in group {
                    let ab = histories_indistinguishable(&sys, a, b).unwrap();
                    assert_eq!(ab, histories_indistinguishable(&sys, b, a).unwrap());
                    if !ab {
                        continue;
                    }
                    for c in group {
                        if histories_indistinguishable(&sys, b, c).unwrap() {
                            assert!(histories_indistinguishable(&sys, a, c).unwrap());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn indistinguishable_histories_have_equal_class_sequences_and_truncations() {
    for seed in 0..10 {
        let sys = random_system(seed, &small_params()).unwrap();
        let views: Vec<String> = sys.views().map(|(n, _)| n.to_string()).collect();
        let goals: Vec<ViewSet> = (1usize..1 << views.len())
            .map(|m| ViewSet::new((0..views.len()).filter(|k| m >> k & 1 == 1).map(|k| views[k].as_str())).unwrap())
            .collect();
        for group in histories_by_instructions(&sys, 4).values() {
            for a in group {
                for b in group {
                    if !histories_indistinguishable(&sys, a, b).unwrap() {
                        continue;
                    }
                    assert_eq!(class_sequence(&sys, a), class_sequence(&sys, b));
                    for goal in &goals {
                        let (ta, tb) = (
                            truncate_history(&sys, a, goal).unwrap(),
                            truncate_history(&sys, b, goal).unwrap(),
                        );
                        assert!(histories_indistinguishable(&sys, &ta, &tb).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn histories_of_different_length_are_distinguishable() {
    let sys = random_system(3, &small_params()).unwrap();
    let mut long = History::new(0);
    long.push(0, sys.successors(0, 0)[0]);
    assert!(!histories_indistinguishable(&sys, &History::new(0), &long).unwrap());
}

proptest! {
    #[test]
    fn prefixes_of_histories_are_histories(seed in 0u64..500, walk in proptest::collection::vec((0usize..3, 0usize..2), 0..8)) {
        let sys = random_system(seed, &RandomParams::default()).unwrap();
        let mut h = History::new(seed as usize % sys.num_states());
        for (i, pick) in walk {
            let i = i % sys.num_instructions();
            let succ = sys.successors(h.head(), i);
            h.push(i, succ[pick % succ.len()]);
        }
        prop_assert!(is_valid_history(&sys, &h));
        let prefixes: Vec<History> = h.prefixes().collect();
        prop_assert_eq!(prefixes.len(), h.len() + 1);
        for p in prefixes {
            prop_assert!(is_valid_history(&sys, &p));
        }
        let round = History::parse(&sys, &h.display(&sys)).unwrap();
        prop_assert_eq!(round, h);
    }
}
