use std::fmt;

use super::oracle::recall_oracle_classes;
use super::random::{random_system, RandomParams};
use crate::error::Result;
use crate::navigation::{
    compose_recall_classes, memoryless_visits, recall_visits, synth_memoryless_classes, synth_recall_classes, Budget,
    Kind, MemorylessStrategy, RecallMachine,
};
use crate::system::{ClassSet, TransitionSystem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub seed: u64,
    pub property: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "seed {}: {}: {}", self.seed, self.property, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FuzzReport {
    pub systems: usize,
    pub atoms: usize,
    pub compositions: usize,
    pub violations: Vec<Violation>,
}

impl FuzzReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for FuzzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        writeln!(
            f,
            "checked {} systems, {} atoms, {} compositions: {} violations",
            self.systems,
            self.atoms,
            self.compositions,
            self.violations.len()
        )
    }
}

/// Views of `sys` in declaration order, and `A*` for every nonempty
/// subset `A` of them indexed by bitmask.
struct Atoms {
    names: Vec<String>,
    stars: Vec<ClassSet>,
}

impl Atoms {
    fn new(sys: &TransitionSystem) -> Self {
        let views: Vec<(String, usize)> = sys.views().map(|(n, c)| (n.to_string(), c)).collect();
        let stars = (0..1usize << views.len())
            .map(|mask| {
                views
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, (_, c))| *c)
                    .collect()
            })
            .collect();
        Atoms {
            names: views.into_iter().map(|(n, _)| n).collect(),
            stars,
        }
    }

    fn full(&self) -> usize {
        (1 << self.names.len()) - 1
    }

    fn label(&self, mask: usize) -> String {
        let names: Vec<&str> = self
            .names
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, n)| n.as_str())
            .collect();
        format!("{{{}}}", names.join(","))
    }

    fn atom(&self, a: usize, b: usize) -> String {
        format!("{} |> {}", self.label(a), self.label(b))
    }
}

struct Truth {
    memoryless: Vec<Vec<Option<MemorylessStrategy>>>,
    recall: Vec<Vec<Option<RecallMachine>>>,
}

impl Truth {
    fn holds(&self, kind: Kind, a: usize, b: usize) -> bool {
        match kind {
            Kind::Memoryless => self.memoryless[a][b].is_some(),
            Kind::Recall => self.recall[a][b].is_some(),
        }
    }
}

fn truth(sys: &TransitionSystem, atoms: &Atoms, budget: &Budget) -> Result<Truth> {
    let n = atoms.full() + 1;
    let mut memoryless = vec![vec![None; n]; n];
    let mut recall = vec![vec![None; n]; n];
    for a in 1..n {
        for b in 1..n {
            memoryless[a][b] = synth_memoryless_classes(sys, &atoms.stars[a], &atoms.stars[b], budget)?;
            recall[a][b] = synth_recall_classes(sys, &atoms.stars[a], &atoms.stars[b], budget)?;
        }
    }
    Ok(Truth { memoryless, recall })
}

fn closure_violations(atoms: &Atoms, truth: &Truth) -> Vec<(&'static str, String)> {
    let n = atoms.full() + 1;
    let mut out = Vec::new();
    for kind in Kind::ALL {
        let holds = |a: usize, b: usize| truth.holds(kind, a, b);
        for a in 1..n {
            for b in 1..n {
                if a & !b == 0 && !holds(a, b) {
                    out.push(("reflexivity", format!("{kind} {} false", atoms.atom(a, b))));
                }
                if !holds(a, b) {
                    continue;
                }
                for c in 0..n {
                    if !holds(a | c, b | c) {
                        out.push((
                            "augmentation",
                            format!(
                                "{kind} {} true but {} false",
                                atoms.atom(a, b),
                                atoms.atom(a | c, b | c)
                            ),
                        ));
                    }
                }
                match kind {
                    Kind::Recall => {
                        for c in 1..n {
                            if holds(b, c) && !holds(a, c) {
                                out.push((
                                    "transitivity",
                                    format!(
                                        "recall {} and {} true but {} false",
                                        atoms.atom(a, b),
                                        atoms.atom(b, c),
                                        atoms.atom(a, c)
                                    ),
                                ));
                            }
                        }
                    }
                    Kind::Memoryless => {
                        // nonempty proper subsets of a
                        let mut sub = (a - 1) & a;
                        while sub > 0 {
                            if !holds(sub, b) {
                                out.push((
                                    "monotonicity",
                                    format!("memoryless {} true but {} false", atoms.atom(a, b), atoms.atom(sub, b)),
                                ));
                            }
                            sub = (sub - 1) & a;
                        }
                    }
                }
            }
        }
    }
    out
}

/// Rule instances of both axiom systems that the true atoms of `sys`
/// (over its declared views) fail to satisfy.
pub fn axiom_closure_violations(sys: &TransitionSystem, budget: &Budget) -> Result<Vec<(&'static str, String)>> {
    let atoms = Atoms::new(sys);
    let truth = truth(sys, &atoms, budget)?;
    Ok(closure_violations(&atoms, &truth))
}

/// Runs every property on `count` random systems with seeds
/// `seed, seed + 1, ...`.
pub fn fuzz_campaign(seed: u64, count: u64, params: &RandomParams, budget: &Budget) -> Result<FuzzReport> {
    let mut report = FuzzReport::default();
    for k in 0..count {
        let s = seed.wrapping_add(k);
        let sys = random_system(s, params)?;
        fuzz_one(s, &sys, budget, &mut report)?;
        report.systems += 1;
    }
    Ok(report)
}

fn fuzz_one(seed: u64, sys: &TransitionSystem, budget: &Budget, report: &mut FuzzReport) -> Result<()> {
    let atoms = Atoms::new(sys);
    let truth = truth(sys, &atoms, budget)?;
    let mut flag = |property: &'static str, detail: String| {
        report.violations.push(Violation { seed, property, detail });
    };
    for (property, detail) in closure_violations(&atoms, &truth) {
        flag(property, detail);
    }
    let n = atoms.full() + 1;
    for a in 1..n {
        for b in 1..n {
            let (sa, sb) = (&atoms.stars[a], &atoms.stars[b]);
            if let Some(s) = &truth.memoryless[a][b] {
                if !memoryless_visits(sys, s, sa, sb) {
                    flag("memoryless witness", atoms.atom(a, b));
                }
                if truth.recall[a][b].is_none() {
                    flag("memoryless implies recall", atoms.atom(a, b));
                }
            }
            if let Some(m) = &truth.recall[a][b] {
                if !recall_visits(sys, m, sa, sb) {
                    flag("recall witness", atoms.atom(a, b));
                }
            }
            if recall_oracle_classes(sys, sa, sb, budget)? != truth.recall[a][b].is_some() {
                flag("oracle equivalence", atoms.atom(a, b));
            }
        }
    }
    report.atoms += 2 * (n - 1) * (n - 1);
    let mut compositions = 0;
    for a in 1..n {
        for b in 1..n {
            let Some(m1) = &truth.recall[a][b] else { continue };
            for c in 1..n {
                let Some(m2) = &truth.recall[b][c] else { continue };
                compositions += 1;
                let composed = compose_recall_classes(sys, m1, m2, &atoms.stars[b]);
                if !recall_visits(sys, &composed, &atoms.stars[a], &atoms.stars[c]) {
                    flag("composition", format!("{} then {}", atoms.atom(a, b), atoms.atom(b, c)));
                }
            }
        }
    }
    report.compositions += compositions;
    Ok(())
}
