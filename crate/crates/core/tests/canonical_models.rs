use navlogic::canonical::{build_memoryless_canonical, build_recall_canonical, PAD_INSTRUCTION, SINK};
use navlogic::navigation::{evaluate_atom, Budget, Kind, MemorylessStrategy};
use navlogic::proof::{derives, AxiomSystem};
use navlogic::{NavStatement, TransitionSystem, ViewSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn atom(text: &str) -> NavStatement {
    NavStatement::parse(text).unwrap()
}

fn vs(names: &[&str]) -> ViewSet {
    ViewSet::new(names.iter().copied()).unwrap()
}

fn all_atoms(universe: &[&str]) -> Vec<NavStatement> {
    let n = universe.len();
    let set = |m: usize| ViewSet::new((0..n).filter(|k| m >> k & 1 == 1).map(|k| universe[k])).unwrap();
    let mut out = Vec::new();
    for a in 1..1 << n {
        for b in 1..1 << n {
            out.push(NavStatement::new(set(a), set(b)));
        }
    }
    out
}

fn round_trip(sigma: &[NavStatement], universe: &[&str]) {
    let v = vs(universe);
    let budget = Budget::default();
    let models = [
        (
            AxiomSystem::Recall,
            Kind::Recall,
            build_recall_canonical(sigma, &v).unwrap(),
        ),
        (
            AxiomSystem::Memoryless,
            Kind::Memoryless,
            build_memoryless_canonical(sigma, &v).unwrap(),
        ),
    ];
    for (system, kind, model) in &models {
        for g in all_atoms(universe) {
            assert_eq!(
                derives(*system, sigma, &g),
                evaluate_atom(model, &g, *kind, &budget).unwrap(),
                "{system} {sigma:?} {g}"
            );
        }
    }
}

#[test]
fn round_trips_for_small_hypothesis_sets_over_two_views() {
    let atoms = all_atoms(&["x", "y"]);
    round_trip(&[], &["x", "y"]);
    for (i, a) in atoms.iter().enumerate() {
        round_trip(std::slice::from_ref(a), &["x", "y"]);
        for b in &atoms[i + 1..] {
            round_trip(&[a.clone(), b.clone()], &["x", "y"]);
        }
    }
}

#[test]
fn round_trips_for_random_hypothesis_sets_over_three_views() {
    let universe = ["x", "y", "z"];
    let atoms = all_atoms(&universe);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let k = rng.gen_range(0..=3);
        let sigma: Vec<_> = atoms.choose_multiple(&mut rng, k).cloned().collect();
        round_trip(&sigma, &universe);
    }
}

#[test]
fn recall_single_view_without_hypotheses() {
    let t = build_recall_canonical(&[], &vs(&["x"])).unwrap();
    assert_eq!(t.instruction_names(), ["x~x"]);
}

#[test]
fn hypothesis_holds_in_both_models() {
    let sigma = [atom("{x}|>{y}")];
    let v = vs(&["x", "y"]);
    let budget = Budget::default();
    let r = build_recall_canonical(&sigma, &v).unwrap();
    assert!(evaluate_atom(&r, &sigma[0], Kind::Recall, &budget).unwrap());
    let m = build_memoryless_canonical(&sigma, &v).unwrap();
    assert!(evaluate_atom(&m, &sigma[0], Kind::Memoryless, &budget).unwrap());
}

#[test]
fn outputs_round_trip_through_system_text() {
    let sigma = [atom("{x}|>{y}"), atom("{y,z}|>{x}")];
    let v = vs(&["x", "y", "z"]);
    for t in [
        build_recall_canonical(&sigma, &v).unwrap(),
        build_memoryless_canonical(&sigma, &v).unwrap(),
    ] {
        assert_eq!(TransitionSystem::parse(&t.to_text()).unwrap(), t);
    }
}

#[test]
fn empty_memoryless_instruction_set_is_padded() {
    let t = build_memoryless_canonical(&[], &vs(&["x", "y"])).unwrap();
    assert_eq!(t.instruction_names(), [PAD_INSTRUCTION]);
    round_trip(&[], &["x", "y"]);
}

/// Under any fixed memoryless strategy, runs starting at the sink or at a
/// wormhole other than the one the strategy exits by never reach `V`.
#[test]
fn sink_and_foreign_wormholes_trap_memoryless_runs() {
    let sigma = [atom("{x}|>{y}"), atom("{y}|>{z}"), atom("{z}|>{x,y}")];
    let v = vs(&["x", "y", "z"]);
    let t = build_memoryless_canonical(&sigma, &v).unwrap();
    let in_v: Vec<usize> = v.iter().map(|n| t.state_id(n).unwrap()).collect();
    let sink = t.state_id(SINK).unwrap();
    let holes: Vec<usize> = (0..t.num_states())
        .filter(|s| t.state_name(*s).starts_with("@w:"))
        .collect();
    assert!(holes.len() > 1);
    let (n_i, n_c) = (t.num_instructions(), t.num_classes());
    for code in 0..n_i.pow(n_c as u32) {
        let choice: Vec<usize> = (0..n_c).map(|k| code / n_i.pow(k as u32) % n_i).collect();
        let s = MemorylessStrategy::new(&t, choice).unwrap();
        let exit = t.instruction_name(s.choice(t.class_index(holes[0])));
        let starts = holes
            .iter()
            .copied()
            .filter(|&w| t.state_name(w) != format!("@w:{exit}"));
        for start in starts.chain([sink]) {
            let mut seen = vec![start];
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                assert!(!in_v.contains(&u), "escaped from {}", t.state_name(start));
                for &w in t.successors(u, s.choice(t.class_index(u))) {
                    if !seen.contains(&w) {
                        seen.push(w);
                        stack.push(w);
                    }
                }
            }
        }
    }
}
