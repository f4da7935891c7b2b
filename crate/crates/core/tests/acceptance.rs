//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero if
//! any criterion fails.

use std::time::{Duration, Instant};

use navlogic::canonical::{build_memoryless_canonical, build_recall_canonical};
use navlogic::cli::run_command;
use navlogic::navigation::{
    belief_count, check_memoryless_witness, check_recall_witness, compose_recall, evaluate_atom, navigability_table,
    synth_memoryless, synth_recall, Budget, Kind, MemorylessStrategy, RecallMachine,
};
use navlogic::proof::{check_proof, derive_proof, derives, saturate, AxiomSystem, Derivation};
use navlogic::testkit::t0::{t0, T0_TABLE};
use navlogic::testkit::{axiom_closure_violations, random_system, recall_oracle, RandomParams};
use navlogic::{format_formula, parse_formula, Formula, NavStatement, TransitionSystem, ViewSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn vs(names: &[&str]) -> ViewSet {
    ViewSet::new(names.iter().copied()).unwrap()
}

fn subsets(names: &[String]) -> Vec<ViewSet> {
    (1usize..1 << names.len())
        .map(|m| ViewSet::new((0..names.len()).filter(|k| m >> k & 1 == 1).map(|k| names[k].as_str())).unwrap())
        .collect()
}

fn view_sets(sys: &TransitionSystem) -> Vec<ViewSet> {
    subsets(&sys.views().map(|(n, _)| n.to_string()).collect::<Vec<_>>())
}

fn atoms_over(universe: &[&str]) -> Vec<NavStatement> {
    let subs = subsets(&universe.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    subs.iter()
        .flat_map(|a| subs.iter().map(move |b| NavStatement::new(a.clone(), b.clone())))
        .collect()
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let took = start.elapsed();
    if took < limit {
        Ok(took)
    } else {
        Err(format!("took {took:.2?}, limit {limit:?}"))
    }
}

fn table_reproduction() -> Outcome {
    let start = Instant::now();
    let sys = t0();
    let table = navigability_table(&sys, &Budget::default()).map_err(|e| e.to_string())?;
    let took = within(Duration::from_secs(5), start)?;
    let mut cells = 0;
    for (r, expected) in T0_TABLE.iter().enumerate() {
        let got = table.row_symbols(r);
        if got != *expected {
            return Err(format!("row {}: expected `{expected}`, got `{got}`", table.labels[r]));
        }
        cells += expected.split_whitespace().count();
    }
    Ok(format!("{cells} cells match in {took:.2?}"))
}

fn t0_claims() -> Outcome {
    let sys = t0();
    let budget = Budget::default();
    let holds =
        |a: &[&str], b: &[&str], kind| evaluate_atom(&sys, &NavStatement::new(vs(a), vs(b)), kind, &budget).unwrap();
    let always0 = MemorylessStrategy::constant(&sys, sys.instruction_id("0").unwrap());
    let claims = [
        ("recall {vA}|>{vE}", holds(&["vA"], &["vE"], Kind::Recall)),
        ("no memoryless {vA}|>{vE}", !holds(&["vA"], &["vE"], Kind::Memoryless)),
        (
            "memoryless {vA}|>{vE,vF}",
            holds(&["vA"], &["vE", "vF"], Kind::Memoryless),
        ),
        (
            "always-0 witnesses {vA}|>{vG}",
            check_memoryless_witness(&sys, &always0, &vs(&["vA"]), &vs(&["vG"])).unwrap(),
        ),
        ("memoryless {vG}|>{vE}", holds(&["vG"], &["vE"], Kind::Memoryless)),
        ("no recall {vC}|>{vG}", !holds(&["vC"], &["vG"], Kind::Recall)),
    ];
    let failed: Vec<&str> = claims.iter().filter(|c| !c.1).map(|c| c.0).collect();
    if failed.is_empty() {
        Ok(format!("{} claims hold", claims.len()))
    } else {
        Err(format!("failed: {}", failed.join("; ")))
    }
}

fn axiom_closure_fuzz() -> Outcome {
    let start = Instant::now();
    let params = RandomParams::default();
    let budget = Budget::default();
    let mut systems = 0;
    for seed in 0..200u64 {
        let sys = random_system(seed, &params).map_err(|e| e.to_string())?;
        if sys.num_states() > 6 || sys.num_instructions() > 3 || sys.num_classes() > 4 {
            return Err(format!("seed {seed}: generator left its bounds"));
        }
        let bad = axiom_closure_violations(&sys, &budget).map_err(|e| e.to_string())?;
        if let Some((rule, detail)) = bad.first() {
            return Err(format!("seed {seed}: {rule}: {detail}"));
        }
        systems += 1;
    }
    let took = within(Duration::from_secs(300), start)?;
    Ok(format!("{systems} systems, 0 violations in {took:.2?}"))
}

fn memoryless_transitivity_counterexample() -> Outcome {
    let sys = t0();
    let budget = Budget::default();
    let sets = view_sets(&sys);
    let truth = |a: &ViewSet, b: &ViewSet| synth_memoryless(&sys, a, b, &budget).unwrap().is_some();
    let mut found = Vec::new();
    for a in &sets {
        for b in &sets {
            if !truth(a, b) {
                continue;
            }
            for c in &sets {
                if truth(b, c) && !truth(a, c) {
                    found.push((a.clone(), b.clone(), c.clone()));
                }
            }
        }
    }
    let target = (vs(&["vA"]), vs(&["vG"]), vs(&["vE"]));
    if found.contains(&target) {
        Ok(format!("({{vA}},{{vG}},{{vE}}) among {} failing triples", found.len()))
    } else {
        Err(format!("target triple missing; {} others found", found.len()))
    }
}

fn oracle_equivalence() -> Outcome {
    let budget = Budget::default();
    let sys = t0();
    let views = ["vA", "vC", "vE", "vF", "vG", "vH"];
    let mut t0_pairs = 0;
    for a in views {
        for b in views {
            let (a, b) = (vs(&[a]), vs(&[b]));
            let synth = synth_recall(&sys, &a, &b, &budget).unwrap().is_some();
            if synth != recall_oracle(&sys, &a, &b, &budget).unwrap() {
                return Err(format!("T0 {a} |> {b}"));
            }
            t0_pairs += 1;
        }
    }
    let params = RandomParams {
        states: (2, 8),
        max_class_size: 4,
        ..RandomParams::default()
    };
    let (mut systems, mut atoms, mut seed) = (0, 0, 0u64);
    while systems < 100 {
        let sys = random_system(1_000 + seed, &params).unwrap();
        seed += 1;
        if belief_count(&sys) > 64 {
            continue;
        }
        for a in view_sets(&sys) {
            for b in view_sets(&sys) {
                let synth = synth_recall(&sys, &a, &b, &budget).unwrap().is_some();
                if synth != recall_oracle(&sys, &a, &b, &budget).unwrap() {
                    return Err(format!("seed {}: {a} |> {b}", 999 + seed));
                }
                atoms += 1;
            }
        }
        systems += 1;
    }
    Ok(format!(
        "{t0_pairs} T0 pairs and {atoms} atoms on {systems} random systems agree"
    ))
}

fn hypothesis_sets(atoms: &[NavStatement]) -> Vec<Vec<NavStatement>> {
    let mut out = vec![vec![]];
    for (i, a) in atoms.iter().enumerate() {
        out.push(vec![a.clone()]);
        for b in &atoms[i + 1..] {
            out.push(vec![a.clone(), b.clone()]);
        }
    }
    out
}

fn proof_cross_check() -> Outcome {
    let universe = ["x", "y"];
    let atoms = atoms_over(&universe);
    let v = vs(&universe);
    let mut checked = 0;
    for sigma in hypothesis_sets(&atoms) {
        for system in AxiomSystem::ALL {
            let closed = saturate(system, &sigma, &v).unwrap();
            for g in &atoms {
                let d = derives(system, &sigma, g);
                if d != closed.contains(g) {
                    return Err(format!("{system} {sigma:?} {g}: derives={d}"));
                }
                match derive_proof(system, &sigma, g) {
                    Some(p) if !d => return Err(format!("{system} proof of underivable {g}: {}", p.to_text())),
                    None if d => return Err(format!("{system} no proof of derivable {g}")),
                    Some(p) => {
                        if let Err(defect) = check_proof(system, &p) {
                            return Err(format!("{system} rejected proof of {g}: {defect}"));
                        }
                        if p.conclusion() != Some(g) {
                            return Err(format!("{system} proof concludes elsewhere for {g}"));
                        }
                    }
                    None => {}
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (system, hypotheses, goal) cases agree"))
}

fn round_trip(sigma: &[NavStatement], universe: &[&str]) -> Result<(), String> {
    let v = vs(universe);
    let budget = Budget::default();
    let recall = build_recall_canonical(sigma, &v).map_err(|e| e.to_string())?;
    let memoryless = build_memoryless_canonical(sigma, &v).map_err(|e| e.to_string())?;
    for (system, kind, model) in [
        (AxiomSystem::Recall, Kind::Recall, &recall),
        (AxiomSystem::Memoryless, Kind::Memoryless, &memoryless),
    ] {
        for g in atoms_over(universe) {
            let proved = derives(system, sigma, &g);
            let holds = evaluate_atom(model, &g, kind, &budget).map_err(|e| e.to_string())?;
            if proved != holds {
                return Err(format!("{system} {sigma:?} {g}: derivable={proved}, true={holds}"));
            }
        }
    }
    Ok(())
}

fn canonical_round_trips() -> Outcome {
    let start = Instant::now();
    let small = hypothesis_sets(&atoms_over(&["x", "y"]));
    for sigma in &small {
        round_trip(sigma, &["x", "y"])?;
    }
    let three = ["x", "y", "z"];
    let atoms = atoms_over(&three);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let random = 50;
    for _ in 0..random {
        let k = rng.gen_range(1..=3);
        let sigma: Vec<_> = atoms.choose_multiple(&mut rng, k).cloned().collect();
        round_trip(&sigma, &three)?;
    }
    let took = within(Duration::from_secs(300), start)?;
    Ok(format!(
        "{} sets over {{x,y}} and {random} over {{x,y,z}}, both builders, in {took:.2?}",
        small.len()
    ))
}

fn composition() -> Outcome {
    let budget = Budget::default();
    let params = RandomParams::default();
    let (mut instances, mut systems) = (0, 0);
    let mut seed = 5_000u64;
    while systems < 100 {
        let sys = random_system(seed, &params).unwrap();
        let before = instances;
        let sets = view_sets(&sys);
        for a in &sets {
            for b in &sets {
                let Some(m1) = synth_recall(&sys, a, b, &budget).unwrap() else {
                    continue;
                };
                for c in &sets {
                    let Some(m2) = synth_recall(&sys, b, c, &budget).unwrap() else {
                        continue;
                    };
                    let composed = compose_recall(&sys, &m1, &m2, b).unwrap();
                    if !check_recall_witness(&sys, &composed, a, c).unwrap() {
                        return Err(format!("seed {seed}: {a} |> {b} then {b} |> {c}"));
                    }
                    instances += 1;
                }
            }
        }
        seed += 1;
        if instances > before {
            systems += 1;
        }
    }
    Ok(format!("{instances} composed machines pass on {systems} systems"))
}

fn random_formula(rng: &mut ChaCha8Rng, depth: u32) -> Formula {
    const NAMES: [&str; 6] = ["vA", "vB", "vC", "x", "y", "z2"];
    let pick = |rng: &mut ChaCha8Rng| {
        let k = rng.gen_range(1..=3);
        ViewSet::new(NAMES.choose_multiple(rng, k).copied()).unwrap()
    };
    match if depth == 0 { 0 } else { rng.gen_range(0..3) } {
        0 => Formula::atom(pick(rng), pick(rng)),
        1 => Formula::not(random_formula(rng, depth - 1)),
        _ => Formula::implies(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
    }
}

fn parsers_and_cli() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let formulas = 1000;
    for _ in 0..formulas {
        let f = random_formula(&mut rng, 4);
        let text = format_formula(&f);
        let back = parse_formula(&text).map_err(|e| format!("{text}: {e}"))?;
        if back != f || format_formula(&back) != text {
            return Err(format!("formula round trip: {text}"));
        }
    }

    let dir = env!("CARGO_MANIFEST_DIR");
    let read = |name: &str| std::fs::read_to_string(format!("{dir}/fixtures/{name}")).unwrap();
    let sys = TransitionSystem::parse(&read("t0.system")).map_err(|e| e.to_string())?;
    if TransitionSystem::parse(&sys.to_text()).unwrap() != sys {
        return Err("system round trip".into());
    }
    let s = MemorylessStrategy::parse(&sys, &read("t0_always0.strategy")).map_err(|e| e.to_string())?;
    if MemorylessStrategy::parse(&sys, &s.to_text(&sys)).unwrap() != s {
        return Err("strategy round trip".into());
    }
    let m = RecallMachine::parse(&sys, &read("t0_zero_then_ones.machine")).map_err(|e| e.to_string())?;
    if RecallMachine::parse(&sys, &m.to_text(&sys)).unwrap() != m {
        return Err("machine round trip".into());
    }
    let p = Derivation::parse(&read("transitivity.proof")).map_err(|e| e.to_string())?;
    if Derivation::parse(&p.to_text()).unwrap() != p {
        return Err("proof round trip".into());
    }

    let t0_path = format!("{dir}/fixtures/t0.system");
    let commands: Vec<Vec<&str>> = vec![
        vec!["table", &t0_path],
        vec!["check", &t0_path, "{vA} |> {vE}", "--kind", "recall"],
        vec!["synth", &t0_path, "--from", "vA", "--to", "vE", "--kind", "recall"],
        vec!["synth", &t0_path, "--from", "vA", "--to", "vG", "--kind", "memoryless"],
        vec![
            "derive", "--axioms", "recall", "--hyp", "{x}|>{y}", "--hyp", "{y}|>{z}", "--goal", "{x}|>{z}", "--proof",
        ],
        vec![
            "canonical",
            "--axioms",
            "memoryless",
            "--views",
            "x,y,z",
            "--hyp",
            "{x}|>{y}",
        ],
        vec!["fuzz", "--seed", "3", "--count", "3"],
    ];
    for args in &commands {
        let run = || run_command(std::iter::once("navlogic").chain(args.iter().copied()));
        let first = run();
        if first.code == 2 || first != run() {
            return Err(format!("unstable or failing CLI output for {args:?}"));
        }
    }
    Ok(format!(
        "{formulas} formulas, 4 fixture formats, {} CLI commands byte-stable",
        commands.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("navigability table of T0", table_reproduction),
        ("T0 textual claims", t0_claims),
        ("axiom closure on random systems", axiom_closure_fuzz),
        (
            "memoryless transitivity counterexample",
            memoryless_transitivity_counterexample,
        ),
        ("recall oracle equivalence", oracle_equivalence),
        ("proof system cross-check", proof_cross_check),
        ("canonical model round trips", canonical_round_trips),
        ("recall machine composition", composition),
        ("parsers, fixtures and CLI stability", parsers_and_cli),
    ];
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {}: {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
