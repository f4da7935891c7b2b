//! The eight-state example system `T0`.
//!
//! Only part of its edge set is pinned down by the prose around the
//! example. The remaining edges were filled in by [`t0_completions`], an
//! exhaustive search over deterministic completions that keeps those
//! satisfying [`certify_t0`]. The shipped fixture is the first certified
//! completion in search order; others exist, so the fixture is one
//! consistent reconstruction, not necessarily the original drawing.

use crate::error::Result;
use crate::navigation::{
    check_memoryless_witness, check_recall_witness, navigability_table, synth_memoryless, synth_recall, Budget,
    MemorylessStrategy, RecallMachine,
};
use crate::system::{SystemBuilder, TransitionSystem, ViewSet};

pub const T0_TEXT: &str = include_str!("../../fixtures/t0.system");

/// The published navigability grid, rows and columns in the order
/// `{a,b} {c,d} {e} {f} {g} {h}`.
pub const T0_TABLE: [&str; 6] = [
    "m m r r m r",
    "- m - - - r",
    "m m m r m m",
    "m m r m m m",
    "m m m m m m",
    "- - - - - m",
];

pub const T0_STATES: [&str; 8] = ["a", "b", "c", "d", "e", "f", "g", "h"];

/// Edges stated explicitly in the prose.
pub const T0_KNOWN_EDGES: [(&str, &str, &str); 9] = [
    ("a", "0", "g"),
    ("b", "0", "g"),
    ("g", "1", "a"),
    ("a", "1", "e"),
    ("e", "1", "c"),
    ("c", "0", "h"),
    ("b", "1", "f"),
    ("d", "1", "h"),
    ("h", "1", "h"),
];

/// Edges left open, in search order.
pub const T0_OPEN_EDGES: [(&str, &str); 7] = [
    ("g", "0"),
    ("h", "0"),
    ("e", "0"),
    ("f", "0"),
    ("f", "1"),
    ("c", "1"),
    ("d", "0"),
];

pub fn t0() -> TransitionSystem {
    TransitionSystem::parse(T0_TEXT).expect("bundled T0 fixture is valid")
}

/// Builds `T0` with the given targets (state indices into [`T0_STATES`])
/// for the open edges.
pub fn t0_with_completion(targets: &[usize; 7]) -> TransitionSystem {
    let mut b = SystemBuilder::new("t0");
    for s in T0_STATES {
        b.state(s);
    }
    b.instruction("0").instruction("1");
    b.obs(["a", "b"]).obs(["c", "d"]);
    for (src, i, dst) in T0_KNOWN_EDGES {
        b.edge(src, i, [dst]);
    }
    for ((src, i), &t) in T0_OPEN_EDGES.iter().zip(targets) {
        b.edge(src, i, [T0_STATES[t]]);
    }
    for (view, state) in [
        ("vA", "a"),
        ("vC", "c"),
        ("vE", "e"),
        ("vF", "f"),
        ("vG", "g"),
        ("vH", "h"),
    ] {
        b.view(view, state);
    }
    b.build().expect("complete deterministic system")
}

fn vs(names: &[&str]) -> ViewSet {
    ViewSet::new(names.iter().copied()).expect("nonempty")
}

/// The "0 once, then 1 forever" recall machine.
pub fn zero_then_ones(sys: &TransitionSystem) -> Result<RecallMachine> {
    let text = "memories start then\ninit * start\nout start 0\nout then 1\nupd start * then\nupd then * then\n";
    RecallMachine::parse(sys, text)
}

/// Every prose constraint on `T0` that `sys` violates.
pub fn certify_t0(sys: &TransitionSystem) -> Result<Vec<String>> {
    let budget = Budget::default();
    let mut bad = Vec::new();
    let id = |n: &str| sys.state_id(n);
    let i0 = sys.instruction_id("0")?;
    let i1 = sys.instruction_id("1")?;

    for (s, i, d) in T0_KNOWN_EDGES {
        if sys.successors(id(s)?, sys.instruction_id(i)?) != [id(d)?] {
            bad.push(format!("edge {s} -{i}-> {d} missing or not deterministic"));
        }
    }
    for s in 0..sys.num_states() {
        for i in 0..sys.num_instructions() {
            if sys.successors(s, i).len() != 1 {
                bad.push(format!("state {} is nondeterministic", sys.state_name(s)));
            }
        }
    }

    let table = navigability_table(sys, &budget)?;
    for (r, expected) in T0_TABLE.iter().enumerate() {
        let got = table.row_symbols(r);
        if got != *expected {
            bad.push(format!(
                "table row {}: expected `{expected}`, got `{got}`",
                table.labels[r]
            ));
        }
    }

    // Memoryless strategies fixing i0 on [a]: started in b, the run stays inside a set.
    let class_a = sys.class_of("a")?;
    for (first, allowed) in [(i0, &["a", "g", "b"][..]), (i1, &["b", "f", "d", "h"][..])] {
        let allowed: Vec<usize> = allowed.iter().map(|n| id(n)).collect::<Result<_>>()?;
        let others: Vec<usize> = (0..sys.num_classes()).filter(|&c| c != class_a).collect();
        for bits in 0..(1usize << others.len()) {
            let mut choice = vec![first; sys.num_classes()];
            for (k, &c) in others.iter().enumerate() {
                choice[c] = if bits >> k & 1 == 1 { i1 } else { i0 };
            }
            let s = MemorylessStrategy::new(sys, choice)?;
            let mut at = id("b")?;
            for _ in 0..=sys.num_states() {
                if !allowed.contains(&at) {
                    bad.push(format!(
                        "run from b with {} on [a] leaves its locked set",
                        sys.instruction_name(first)
                    ));
                    break;
                }
                at = sys.successors(at, s.choice(sys.class_index(at)))[0];
            }
        }
    }

    // From c after 0, and from d after 1, the system is stuck in h.
    let h = id("h")?;
    for (start, first) in [("c", i0), ("d", i1)] {
        if sys.successors(id(start)?, first) != [h] {
            bad.push(format!("{start} does not fall into h"));
        }
    }
    if (0..sys.num_instructions()).any(|i| sys.successors(h, i) != [h]) {
        bad.push("h is not absorbing".into());
    }

    // Navigability claims made in the prose.
    let always0 = MemorylessStrategy::constant(sys, i0);
    let always1 = MemorylessStrategy::constant(sys, i1);
    let claims: [(&str, bool); 8] = [
        (
            "recall {vA}|>{vE}",
            synth_recall(sys, &vs(&["vA"]), &vs(&["vE"]), &budget)?.is_some(),
        ),
        (
            "no memoryless {vA}|>{vE}",
            synth_memoryless(sys, &vs(&["vA"]), &vs(&["vE"]), &budget)?.is_none(),
        ),
        (
            "no memoryless {vA}|>{vF}",
            synth_memoryless(sys, &vs(&["vA"]), &vs(&["vF"]), &budget)?.is_none(),
        ),
        (
            "always-1 navigates {vA}|>{vE,vF}",
            check_memoryless_witness(sys, &always1, &vs(&["vA"]), &vs(&["vE", "vF"]))?,
        ),
        (
            "always-0 navigates {vA}|>{vG}",
            check_memoryless_witness(sys, &always0, &vs(&["vA"]), &vs(&["vG"]))?,
        ),
        (
            "always-1 navigates {vG}|>{vE}",
            check_memoryless_witness(sys, &always1, &vs(&["vG"]), &vs(&["vE"]))?,
        ),
        (
            "always-1 navigates {vA}|>{vC}",
            check_memoryless_witness(sys, &always1, &vs(&["vA"]), &vs(&["vC"]))?,
        ),
        (
            "0-then-1 machine navigates {vA}|>{vE}",
            check_recall_witness(sys, &zero_then_ones(sys)?, &vs(&["vA"]), &vs(&["vE"]))?,
        ),
    ];
    for (claim, holds) in claims {
        if !holds {
            bad.push(format!("claim fails: {claim}"));
        }
    }
    if synth_recall(sys, &vs(&["vC"]), &vs(&["vG"]), &budget)?.is_some() {
        bad.push("claim fails: no recall {vC}|>{vG}".into());
    }
    Ok(bad)
}

/// Cheap necessary conditions checked before building a candidate.
fn plausible(targets: &[usize; 7]) -> bool {
    const A: usize = 0;
    const B: usize = 1;
    const D: usize = 3;
    const F: usize = 5;
    const G: usize = 6;
    const H: usize = 7;
    let [g0, h0, _e0, f0, f1, _c1, _d0] = *targets;
    h0 == H && [A, B, G].contains(&g0) && [B, F, D, H].contains(&f0) && [B, F, D, H].contains(&f1)
}

/// All certified deterministic completions, in lexicographic order of
/// the open-edge targets.
pub fn t0_completions() -> Result<Vec<[usize; 7]>> {
    let n = T0_STATES.len();
    let mut found = Vec::new();
    let mut targets = [0usize; 7];
    'outer: loop {
        if plausible(&targets) {
            let sys = t0_with_completion(&targets);
            if certify_t0(&sys)?.is_empty() {
                found.push(targets);
            }
        }
        for k in (0..7).rev() {
            targets[k] += 1;
            if targets[k] < n {
                continue 'outer;
            }
            targets[k] = 0;
        }
        break;
    }
    Ok(found)
}
