//! Derivability of atoms from atomic hypotheses in the two axiom systems.
//!
//! Recall: Reflexivity, Augmentation, Transitivity (Armstrong's axioms).
//! Memoryless: Reflexivity, Augmentation, Monotonicity.
//!
//! Recall derivability is decided by attribute closure: `Σ ⊢ A ▷ B` iff
//! `A ⊆ Cl(B)`, where `Cl(B)` grows from `B` by adding `C` whenever some
//! hypothesis `C ▷ D` has `D` already inside. Memoryless derivability has
//! the closed form `A ⊆ B`, or some hypothesis `C ▷ D` with `D ⊆ B` and
//! `A ⊆ C ∪ B`. Both are cross-checked against [`saturate`].

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::formula::NavStatement;
use crate::system::ViewSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxiomSystem {
    Recall,
    Memoryless,
}

impl AxiomSystem {
    pub const ALL: [AxiomSystem; 2] = [AxiomSystem::Recall, AxiomSystem::Memoryless];
}

impl fmt::Display for AxiomSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxiomSystem::Recall => "recall",
            AxiomSystem::Memoryless => "memoryless",
        })
    }
}

impl FromStr for AxiomSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "recall" => Ok(AxiomSystem::Recall),
            "memoryless" => Ok(AxiomSystem::Memoryless),
            other => Err(Error::InvalidParams(format!(
                "unknown axiom system `{other}` (expected recall or memoryless)"
            ))),
        }
    }
}

/// Line references are zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Justification {
    Hypothesis(usize),
    Reflexivity,
    Augmentation(usize, ViewSet),
    Transitivity(usize, usize),
    Monotonicity(usize, ViewSet),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProofLine {
    pub statement: NavStatement,
    pub by: Justification,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    /// Every set in the proof must stay inside this view universe.
    pub universe: BTreeSet<String>,
    pub hypotheses: Vec<NavStatement>,
    pub lines: Vec<ProofLine>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofDefect {
    /// One-based line number; 0 for defects not tied to a line.
    pub line: usize,
    pub reason: String,
}

impl fmt::Display for ProofDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            f.write_str(&self.reason)
        } else {
            write!(f, "line {}: {}", self.line, self.reason)
        }
    }
}

fn universe_of<'a>(statements: impl IntoIterator<Item = &'a NavStatement>) -> BTreeSet<String> {
    statements
        .into_iter()
        .flat_map(|s| s.lhs.iter().chain(s.rhs.iter()))
        .map(str::to_string)
        .collect()
}

impl Derivation {
    pub fn conclusion(&self) -> Option<&NavStatement> {
        self.lines.last().map(|l| &l.statement)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> = self.universe.iter().map(String::as_str).collect();
        let _ = writeln!(out, "views {}", names.join(" "));
        for (k, h) in self.hypotheses.iter().enumerate() {
            let _ = writeln!(out, "hyp {}: {h}", k + 1);
        }
        for (k, line) in self.lines.iter().enumerate() {
            let by = match &line.by {
                Justification::Hypothesis(i) => format!("hyp {}", i + 1),
                Justification::Reflexivity => "refl".to_string(),
                Justification::Augmentation(j, c) => format!("aug {} {c}", j + 1),
                Justification::Transitivity(j, l) => format!("trans {} {}", j + 1, l + 1),
                Justification::Monotonicity(j, a) => format!("mono {} {a}", j + 1),
            };
            let _ = writeln!(out, "line {}: {} by {by}", k + 1, line.statement);
        }
        out
    }

    /// Parses the proof text format. Without a `views` line the universe
    /// is every name in the hypotheses and the final line.
    pub fn parse(text: &str) -> Result<Derivation> {
        let mut universe: Option<BTreeSet<String>> = None;
        let mut hypotheses = Vec::new();
        let mut lines = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: &str| Error::Parse {
                line: line_no,
                message: m.to_string(),
            };
            if let Some(rest) = line.strip_prefix("views") {
                if universe.is_some() {
                    return Err(err("duplicate `views` line"));
                }
                universe = Some(rest.split_whitespace().map(str::to_string).collect());
                continue;
            }
            let (head, body) = line
                .split_once(':')
                .ok_or_else(|| err("expected `hyp <n>:` or `line <n>:`"))?;
            let mut head_words = head.split_whitespace();
            let kind = head_words.next().unwrap_or_default();
            let number: usize = head_words
                .next()
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| err("missing line number"))?;
            if head_words.next().is_some() {
                return Err(err("unexpected text before `:`"));
            }
            match kind {
                "hyp" => {
                    if number != hypotheses.len() + 1 || !lines.is_empty() {
                        return Err(err("hypotheses must be numbered 1, 2, ... and precede all lines"));
                    }
                    hypotheses.push(NavStatement::parse(body)?);
                }
                "line" => {
                    if number != lines.len() + 1 {
                        return Err(err("lines must be numbered 1, 2, ..."));
                    }
                    let (atom, by) = body.rsplit_once(" by ").ok_or_else(|| err("missing `by <rule>`"))?;
                    let statement = NavStatement::parse(atom)?;
                    let by = parse_justification(by.trim()).ok_or_else(|| err("malformed justification"))?;
                    lines.push(ProofLine { statement, by });
                }
                _ => return Err(err("expected `hyp` or `line`")),
            }
        }
        let universe = universe
            .unwrap_or_else(|| universe_of(hypotheses.iter().chain(lines.last().map(|l: &ProofLine| &l.statement))));
        Ok(Derivation {
            universe,
            hypotheses,
            lines,
        })
    }
}

fn parse_justification(text: &str) -> Option<Justification> {
    let index = |s: &str| s.parse::<usize>().ok().filter(|&n| n >= 1).map(|n| n - 1);
    let (rule, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
    let rest = rest.trim();
    match rule {
        "refl" if rest.is_empty() => Some(Justification::Reflexivity),
        "hyp" => Some(Justification::Hypothesis(index(rest)?)),
        "trans" => {
            let mut it = rest.split_whitespace();
            let j = index(it.next()?)?;
            let k = index(it.next()?)?;
            it.next().is_none().then_some(Justification::Transitivity(j, k))
        }
        "aug" | "mono" => {
            let (line, set) = rest.split_once(char::is_whitespace)?;
            let set = set.trim();
            if !(set.starts_with('{') && set.ends_with('}')) {
                return None;
            }
            let set = ViewSet::parse_list(set).ok()?;
            let j = index(line)?;
            Some(if rule == "aug" {
                Justification::Augmentation(j, set)
            } else {
                Justification::Monotonicity(j, set)
            })
        }
        _ => None,
    }
}

/// Closure run: the successive sets and the hypothesis applied at each step.
fn closure_trace(
    sigma: &[NavStatement],
    seed: &ViewSet,
    stop_at: Option<&ViewSet>,
) -> (ViewSet, Vec<(usize, ViewSet)>) {
    let mut current = seed.clone();
    let mut steps = Vec::new();
    let done = |c: &ViewSet| stop_at.is_some_and(|a| a.is_subset(c));
    let mut changed = true;
    while changed && !done(&current) {
        changed = false;
        for (k, h) in sigma.iter().enumerate() {
            if h.rhs.is_subset(&current) && !h.lhs.is_subset(&current) {
                steps.push((k, current.clone()));
                current = current.union(&h.lhs);
                changed = true;
                if done(&current) {
                    break;
                }
            }
        }
    }
    (current, steps)
}

/// `Cl(B)`: the views derivably navigable into `B` under recall.
pub fn closure_recall(sigma: &[NavStatement], b: &ViewSet) -> ViewSet {
    closure_trace(sigma, b, None).0
}

fn memoryless_witness(sigma: &[NavStatement], goal: &NavStatement) -> Option<usize> {
    sigma
        .iter()
        .position(|h| h.rhs.is_subset(&goal.rhs) && goal.lhs.is_subset(&h.lhs.union(&goal.rhs)))
}

pub fn derives(system: AxiomSystem, sigma: &[NavStatement], goal: &NavStatement) -> bool {
    if goal.lhs.is_subset(&goal.rhs) {
        return true;
    }
    match system {
        AxiomSystem::Recall => goal.lhs.is_subset(&closure_recall(sigma, &goal.rhs)),
        AxiomSystem::Memoryless => memoryless_witness(sigma, goal).is_some(),
    }
}

/// A checkable derivation of `goal`, or `None` when it is not derivable.
pub fn derive_proof(system: AxiomSystem, sigma: &[NavStatement], goal: &NavStatement) -> Option<Derivation> {
    let universe = universe_of(sigma.iter().chain([goal]));
    let mut lines = Vec::new();
    let mut push = |statement: NavStatement, by: Justification| {
        lines.push(ProofLine { statement, by });
        lines.len() - 1
    };
    let (a, b) = (&goal.lhs, &goal.rhs);
    if a.is_subset(b) {
        push(goal.clone(), Justification::Reflexivity);
    } else {
        match system {
            AxiomSystem::Recall => {
                let (reached, steps) = closure_trace(sigma, b, Some(a));
                if !a.is_subset(&reached) {
                    return None;
                }
                // invariant: line `into_goal` proves X ▷ B for the current X
                let mut into_goal = push(NavStatement::new(b.clone(), b.clone()), Justification::Reflexivity);
                for (k, before) in steps {
                    let h = &sigma[k];
                    let hyp = push(h.clone(), Justification::Hypothesis(k));
                    let after = before.union(&h.lhs);
                    let aug = push(
                        NavStatement::new(after.clone(), h.rhs.union(&before)),
                        Justification::Augmentation(hyp, before.clone()),
                    );
                    into_goal = push(
                        NavStatement::new(after, b.clone()),
                        Justification::Transitivity(aug, into_goal),
                    );
                }
                let widen = push(
                    NavStatement::new(a.clone(), reached.clone()),
                    Justification::Reflexivity,
                );
                push(goal.clone(), Justification::Transitivity(widen, into_goal));
            }
            AxiomSystem::Memoryless => {
                let k = memoryless_witness(sigma, goal)?;
                let h = &sigma[k];
                let hyp = push(h.clone(), Justification::Hypothesis(k));
                let aug = push(
                    NavStatement::new(h.lhs.union(b), h.rhs.union(b)),
                    Justification::Augmentation(hyp, b.clone()),
                );
                push(goal.clone(), Justification::Monotonicity(aug, a.clone()));
            }
        }
    }
    Some(Derivation {
        universe,
        hypotheses: sigma.to_vec(),
        lines,
    })
}

/// Local check of every line against the rules of `system`.
pub fn check_proof(system: AxiomSystem, d: &Derivation) -> Result<(), ProofDefect> {
    let defect = |line: usize, reason: String| Err(ProofDefect { line, reason });
    let within = |s: &ViewSet| s.iter().all(|v| d.universe.contains(v));
    for (k, h) in d.hypotheses.iter().enumerate() {
        if !within(&h.lhs) || !within(&h.rhs) {
            return defect(0, format!("hypothesis {} leaves the view universe", k + 1));
        }
    }
    if d.lines.is_empty() {
        return defect(0, "derivation has no lines".into());
    }
    for (k, line) in d.lines.iter().enumerate() {
        let n = k + 1;
        let st = &line.statement;
        if !within(&st.lhs) || !within(&st.rhs) {
            return defect(n, "statement leaves the view universe".into());
        }
        let earlier = |j: usize| {
            if j < k {
                Ok(&d.lines[j].statement)
            } else {
                Err(ProofDefect {
                    line: n,
                    reason: format!("refers to line {} which is not earlier", j + 1),
                })
            }
        };
        let ok = match &line.by {
            Justification::Hypothesis(i) => d.hypotheses.get(*i) == Some(st),
            Justification::Reflexivity => st.lhs.is_subset(&st.rhs),
            Justification::Augmentation(j, c) => {
                if !within(c) {
                    return defect(n, "augmentation set leaves the view universe".into());
                }
                let p = earlier(*j)?;
                st.lhs == p.lhs.union(c) && st.rhs == p.rhs.union(c)
            }
            Justification::Transitivity(j, l) => {
                if system != AxiomSystem::Recall {
                    return defect(n, format!("transitivity is not a {system} rule"));
                }
                let (p, q) = (earlier(*j)?, earlier(*l)?);
                p.rhs == q.lhs && st.lhs == p.lhs && st.rhs == q.rhs
            }
            Justification::Monotonicity(j, a) => {
                if system != AxiomSystem::Memoryless {
                    return defect(n, format!("monotonicity is not a {system} rule"));
                }
                let p = earlier(*j)?;
                a.is_subset(&p.lhs) && st.lhs == *a && st.rhs == p.rhs
            }
        };
        if !ok {
            return defect(n, format!("`{st}` does not follow by the cited rule"));
        }
    }
    Ok(())
}

/// Default bound on `|V|` for [`saturate`].
pub const SATURATE_MAX_VIEWS: usize = 4;

/// Every atom over `universe` derivable from `sigma`, by exhaustive rule
/// application.
pub fn saturate(system: AxiomSystem, sigma: &[NavStatement], universe: &ViewSet) -> Result<BTreeSet<NavStatement>> {
    saturate_bounded(system, sigma, universe, SATURATE_MAX_VIEWS)
}

#[allow(clippy::needless_range_loop)]
pub fn saturate_bounded(
    system: AxiomSystem,
    sigma: &[NavStatement],
    universe: &ViewSet,
    max_views: usize,
) -> Result<BTreeSet<NavStatement>> {
    let names: Vec<&str> = universe.iter().collect();
    if names.len() > max_views {
        return Err(Error::BudgetExceeded {
            what: "saturation view universe",
            needed: names.len() as u128,
            bound: max_views as u128,
        });
    }
    let to_mask = |s: &ViewSet| -> Result<usize> {
        s.iter().try_fold(0usize, |m, v| {
            names
                .iter()
                .position(|n| *n == v)
                .map(|k| m | 1 << k)
                .ok_or_else(|| Error::UnknownView(v.to_string()))
        })
    };
    let n = 1usize << names.len();
    let mut known = vec![vec![false; n]; n];
    for h in sigma {
        known[to_mask(&h.lhs)?][to_mask(&h.rhs)?] = true;
    }
    for a in 1..n {
        for b in 1..n {
            if a & !b == 0 {
                known[a][b] = true;
            }
        }
    }
    loop {
        let mut added = Vec::new();
        for a in 1..n {
            for b in 1..n {
                if !known[a][b] {
                    continue;
                }
                for c in 0..n {
                    added.push((a | c, b | c));
                }
                match system {
                    AxiomSystem::Recall => {
                        for c in 1..n {
                            if known[b][c] {
                                added.push((a, c));
                            }
                        }
                    }
                    AxiomSystem::Memoryless => {
                        let mut sub = a;
                        while sub > 0 {
                            added.push((sub, b));
                            sub = (sub - 1) & a;
                        }
                    }
                }
            }
        }
        let mut changed = false;
        for (a, b) in added {
            if !known[a][b] {
                known[a][b] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let from_mask = |m: usize| {
        ViewSet::new(
            names
                .iter()
                .enumerate()
                .filter(|(k, _)| m >> k & 1 == 1)
                .map(|(_, n)| *n),
        )
        .expect("nonempty mask")
    };
    let mut out = BTreeSet::new();
    for (a, row) in known.iter().enumerate().skip(1) {
        for (b, &k) in row.iter().enumerate().skip(1) {
            if k {
                out.insert(NavStatement::new(from_mask(a), from_mask(b)));
            }
        }
    }
    Ok(out)
}
