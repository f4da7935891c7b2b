//! Finite transition systems with an indistinguishability partition.
//!
//! States, observation classes and instructions are addressed by dense
//! indices. Everything iterates in declaration order: states and
//! instructions as declared, classes ordered by their first declared
//! member.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};

pub type StateId = usize;
pub type ClassId = usize;
pub type InstrId = usize;

/// A set of observation classes, e.g. the image `A*` of a view set.
pub type ClassSet = BTreeSet<ClassId>;

const RESERVED: &[char] = &['{', '}', ',', '|', '>', '!', '(', ')', '-', '#'];

/// Checks the token rules shared by states, instructions and views.
pub fn is_identifier(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c))
}

fn check_identifier(name: &str) -> Result<()> {
    if is_identifier(name) {
        Ok(())
    } else {
        Err(Error::InvalidIdentifier(name.to_string()))
    }
}

/// A nonempty set of view names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ViewSet(BTreeSet<String>);

impl ViewSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = names.into_iter().map(Into::into).collect();
        if set.is_empty() {
            return Err(Error::EmptySet(0));
        }
        for name in &set {
            check_identifier(name)?;
        }
        Ok(ViewSet(set))
    }

    pub fn singleton(name: impl Into<String>) -> Result<Self> {
        Self::new([name.into()])
    }

    /// Parses `{a,b}`, `a,b` or `a b`.
    pub fn parse_list(text: &str) -> Result<Self> {
        let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
        Self::new(
            inner
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty()),
        )
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn names(&self) -> &BTreeSet<String> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains(name)
    }

    pub fn is_subset(&self, other: &ViewSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &ViewSet) -> ViewSet {
        ViewSet(self.0.union(&other.0).cloned().collect())
    }
}

impl fmt::Display for ViewSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_char('{')?;
        for (k, name) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_char(',')?;
            }
            f.write_str(name)?;
        }
        f.write_char('}')
    }
}

/// A validated finite transition system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionSystem {
    name: String,
    states: Vec<String>,
    state_index: HashMap<String, StateId>,
    class_of: Vec<ClassId>,
    classes: Vec<Vec<StateId>>,
    views: Vec<(String, ClassId)>,
    view_index: HashMap<String, ClassId>,
    instructions: Vec<String>,
    instr_index: HashMap<String, InstrId>,
    // delta[state][instr] is sorted and nonempty
    delta: Vec<Vec<Vec<StateId>>>,
}

impl TransitionSystem {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn num_instructions(&self) -> usize {
        self.instructions.len()
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.states[s]
    }

    pub fn instruction_name(&self, i: InstrId) -> &str {
        &self.instructions[i]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn instruction_names(&self) -> &[String] {
        &self.instructions
    }

    pub fn state_id(&self, name: &str) -> Result<StateId> {
        self.state_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn instruction_id(&self, name: &str) -> Result<InstrId> {
        self.instr_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownInstruction(name.to_string()))
    }

    /// Members of a class, in declaration order.
    pub fn class_members(&self, c: ClassId) -> &[StateId] {
        &self.classes[c]
    }

    pub fn class_index(&self, s: StateId) -> ClassId {
        self.class_of[s]
    }

    /// The observation class `[w]` of a named state.
    pub fn class_of(&self, state: &str) -> Result<ClassId> {
        Ok(self.class_of[self.state_id(state)?])
    }

    /// Finds the class whose member set is exactly `members`.
    pub fn class_by_members<S: AsRef<str>>(&self, members: &[S]) -> Result<ClassId> {
        let describe = || {
            let names: Vec<&str> = members.iter().map(AsRef::as_ref).collect();
            format!("{{{}}}", names.join(" "))
        };
        let first = members.first().ok_or_else(|| Error::UnknownClass(describe()))?;
        let class = self.class_of(first.as_ref())?;
        let mut given = BTreeSet::new();
        for m in members {
            given.insert(self.state_id(m.as_ref())?);
        }
        let actual: BTreeSet<StateId> = self.classes[class].iter().copied().collect();
        if given == actual {
            Ok(class)
        } else {
            Err(Error::UnknownClass(describe()))
        }
    }

    /// Renders a class as `{a b}`.
    pub fn class_label(&self, c: ClassId) -> String {
        let names: Vec<&str> = self.classes[c].iter().map(|&s| self.states[s].as_str()).collect();
        format!("{{{}}}", names.join(" "))
    }

    pub fn views(&self) -> impl Iterator<Item = (&str, ClassId)> {
        self.views.iter().map(|(n, c)| (n.as_str(), *c))
    }

    pub fn view_class(&self, view: &str) -> Result<ClassId> {
        self.view_index
            .get(view)
            .copied()
            .ok_or_else(|| Error::UnknownView(view.to_string()))
    }

    /// `A* = { a* | a in A }`.
    pub fn star<'a, I>(&self, views: I) -> Result<ClassSet>
    where
        I: IntoIterator<Item = &'a str>,
    {
        views.into_iter().map(|v| self.view_class(v)).collect()
    }

    pub fn star_set(&self, views: &ViewSet) -> Result<ClassSet> {
        self.star(views.iter())
    }

    /// `Δ_i(w)`, sorted by state index.
    pub fn successors(&self, s: StateId, i: InstrId) -> &[StateId] {
        &self.delta[s][i]
    }

    pub fn is_transition(&self, from: StateId, i: InstrId, to: StateId) -> bool {
        self.delta[from][i].binary_search(&to).is_ok()
    }

    /// Returns a copy with one extra view per class that has none, named
    /// `prefix` followed by the class index. Existing views are kept.
    pub fn with_class_views(&self, prefix: &str) -> Result<TransitionSystem> {
        let mut out = self.clone();
        for c in 0..self.classes.len() {
            let name = format!("{prefix}{c}");
            check_identifier(&name)?;
            if out.view_index.contains_key(&name) {
                return Err(Error::Duplicate { kind: "view", name });
            }
            out.view_index.insert(name.clone(), c);
            out.views.push((name, c));
        }
        Ok(out)
    }

    /// Serializes to the line-oriented system format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "system {}", self.name);
        let _ = writeln!(out, "states {}", self.states.join(" "));
        for class in &self.classes {
            if class.len() > 1 {
                let names: Vec<&str> = class.iter().map(|&s| self.states[s].as_str()).collect();
                let _ = writeln!(out, "obs {}", names.join(" "));
            }
        }
        let _ = writeln!(out, "instructions {}", self.instructions.join(" "));
        for (s, row) in self.delta.iter().enumerate() {
            for (i, succ) in row.iter().enumerate() {
                let names: Vec<&str> = succ.iter().map(|&t| self.states[t].as_str()).collect();
                let _ = writeln!(
                    out,
                    "edge {} {} {}",
                    self.states[s],
                    self.instructions[i],
                    names.join(" ")
                );
            }
        }
        for (view, class) in &self.views {
            let rep = self.classes[*class][0];
            let _ = writeln!(out, "view {} {}", view, self.states[rep]);
        }
        out
    }

    /// Parses and validates the line-oriented system format.
    pub fn parse(text: &str) -> Result<TransitionSystem> {
        let mut builder = SystemBuilder::new("unnamed");
        let mut named = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let keyword = words.next().unwrap_or_default();
            let args: Vec<&str> = words.collect();
            let parse_err = |message: &str| Error::Parse {
                line: line_no,
                message: message.to_string(),
            };
            match keyword {
                "system" => {
                    if args.len() != 1 {
                        return Err(parse_err("expected `system <name>`"));
                    }
                    if named {
                        return Err(parse_err("duplicate `system` line"));
                    }
                    named = true;
                    builder.name = args[0].to_string();
                }
                "states" => builder.states.extend(args.iter().map(|s| s.to_string())),
                "instructions" => builder.instructions.extend(args.iter().map(|s| s.to_string())),
                "obs" => {
                    if args.is_empty() {
                        return Err(parse_err("expected `obs <state>...`"));
                    }
                    builder.obs.push(args.iter().map(|s| s.to_string()).collect());
                }
                "edge" => {
                    if args.len() < 2 {
                        return Err(parse_err("expected `edge <src> <instr> <dst>...`"));
                    }
                    builder.edge(args[0], args[1], args[2..].iter().copied());
                }
                "view" => {
                    if args.len() != 2 {
                        return Err(parse_err("expected `view <name> <state>`"));
                    }
                    builder.view(args[0], args[1]);
                }
                other => return Err(parse_err(&format!("unknown directive `{other}`"))),
            }
        }
        builder.build()
    }
}

impl fmt::Display for TransitionSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Collects raw declarations; `build` validates them.
#[derive(Debug, Clone, Default)]
pub struct SystemBuilder {
    name: String,
    states: Vec<String>,
    obs: Vec<Vec<String>>,
    instructions: Vec<String>,
    edges: Vec<(String, String, Vec<String>)>,
    views: Vec<(String, String)>,
}

impl SystemBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        SystemBuilder {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn state(&mut self, name: impl Into<String>) -> &mut Self {
        self.states.push(name.into());
        self
    }

    pub fn instruction(&mut self, name: impl Into<String>) -> &mut Self {
        self.instructions.push(name.into());
        self
    }

    /// Declares the given states indistinguishable (merged transitively).
    pub fn obs<I, S>(&mut self, states: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.obs.push(states.into_iter().map(Into::into).collect());
        self
    }

    pub fn edge<I, S>(&mut self, src: &str, instr: &str, dsts: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.edges.push((
            src.to_string(),
            instr.to_string(),
            dsts.into_iter().map(Into::into).collect(),
        ));
        self
    }

    /// Maps a view to the class of `state`.
    pub fn view(&mut self, name: &str, state: &str) -> &mut Self {
        self.views.push((name.to_string(), state.to_string()));
        self
    }

    pub fn build(&self) -> Result<TransitionSystem> {
        check_identifier(&self.name)?;
        if self.states.is_empty() {
            return Err(Error::NoStates);
        }
        if self.instructions.is_empty() {
            return Err(Error::NoInstructions);
        }
        let mut state_index = HashMap::new();
        for (k, s) in self.states.iter().enumerate() {
            check_identifier(s)?;
            if state_index.insert(s.clone(), k).is_some() {
                return Err(Error::Duplicate {
                    kind: "state",
                    name: s.clone(),
                });
            }
        }
        let mut instr_index = HashMap::new();
        for (k, i) in self.instructions.iter().enumerate() {
            check_identifier(i)?;
            if instr_index.insert(i.clone(), k).is_some() {
                return Err(Error::Duplicate {
                    kind: "instruction",
                    name: i.clone(),
                });
            }
        }
        let lookup = |name: &str| {
            state_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownState(name.to_string()))
        };

        // union-find over obs groups
        let n = self.states.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for group in &self.obs {
            let ids = group.iter().map(|s| lookup(s)).collect::<Result<Vec<_>>>()?;
            for pair in ids.windows(2) {
                let (ra, rb) = (find(&mut parent, pair[0]), find(&mut parent, pair[1]));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<StateId>> = Vec::new();
        let mut root_class: HashMap<usize, ClassId> = HashMap::new();
        for (s, slot) in class_of.iter_mut().enumerate() {
            let root = find(&mut parent, s);
            let c = *root_class.entry(root).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[c].push(s);
            *slot = c;
        }

        let m = self.instructions.len();
        let mut delta: Vec<Vec<BTreeSet<StateId>>> = vec![vec![BTreeSet::new(); m]; n];
        for (src, instr, dsts) in &self.edges {
            let s = lookup(src)?;
            let i = instr_index
                .get(instr)
                .copied()
                .ok_or_else(|| Error::UnknownInstruction(instr.clone()))?;
            if dsts.is_empty() {
                return Err(Error::EmptySuccessorSet {
                    state: src.clone(),
                    instruction: instr.clone(),
                });
            }
            for d in dsts {
                delta[s][i].insert(lookup(d)?);
            }
        }
        for (s, row) in delta.iter().enumerate() {
            for (i, succ) in row.iter().enumerate() {
                if succ.is_empty() {
                    return Err(Error::MissingTransition {
                        state: self.states[s].clone(),
                        instruction: self.instructions[i].clone(),
                    });
                }
            }
        }

        let mut views = Vec::new();
        let mut view_index = HashMap::new();
        for (view, state) in &self.views {
            check_identifier(view)?;
            let c = class_of[lookup(state)?];
            if view_index.insert(view.clone(), c).is_some() {
                return Err(Error::Duplicate {
                    kind: "view",
                    name: view.clone(),
                });
            }
            views.push((view.clone(), c));
        }

        Ok(TransitionSystem {
            name: self.name.clone(),
            states: self.states.clone(),
            state_index,
            class_of,
            classes,
            views,
            view_index,
            instructions: self.instructions.clone(),
            instr_index,
            delta: delta
                .into_iter()
                .map(|row| row.into_iter().map(|s| s.into_iter().collect()).collect())
                .collect(),
        })
    }
}

/// A finite history `w0, i1, w1, ..., in, wn`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct History {
    pub start: StateId,
    pub steps: Vec<(InstrId, StateId)>,
}

impl History {
    pub fn new(start: StateId) -> Self {
        History {
            start,
            steps: Vec::new(),
        }
    }

    pub fn push(&mut self, instr: InstrId, state: StateId) {
        self.steps.push((instr, state));
    }

    /// `hd(h)`: the last state.
    pub fn head(&self) -> StateId {
        self.steps.last().map_or(self.start, |&(_, s)| s)
    }

    /// Number of transitions.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        std::iter::once(self.start).chain(self.steps.iter().map(|&(_, s)| s))
    }

    /// Resolves an alternating `state, instr, state, ...` token list.
    /// Does not check the transitions; see [`is_valid_history`].
    pub fn from_tokens<S: AsRef<str>>(sys: &TransitionSystem, tokens: &[S]) -> Result<History> {
        if tokens.is_empty() {
            return Err(Error::MalformedSequence("empty sequence".into()));
        }
        if tokens.len().is_multiple_of(2) {
            return Err(Error::MalformedSequence(
                "sequence must start and end with a state".into(),
            ));
        }
        let mut h = History::new(sys.state_id(tokens[0].as_ref())?);
        for pair in tokens[1..].chunks(2) {
            h.push(sys.instruction_id(pair[0].as_ref())?, sys.state_id(pair[1].as_ref())?);
        }
        Ok(h)
    }

    /// Parses `g,1,a,1,e` (commas and/or whitespace).
    pub fn parse(sys: &TransitionSystem, text: &str) -> Result<History> {
        let tokens: Vec<&str> = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        Self::from_tokens(sys, &tokens)
    }

    pub fn display(&self, sys: &TransitionSystem) -> String {
        let mut out = sys.state_name(self.start).to_string();
        for &(i, s) in &self.steps {
            let _ = write!(out, ",{},{}", sys.instruction_name(i), sys.state_name(s));
        }
        out
    }

    /// Every prefix ending at a state, shortest first.
    pub fn prefixes(&self) -> impl Iterator<Item = History> + '_ {
        (0..=self.steps.len()).map(move |n| History {
            start: self.start,
            steps: self.steps[..n].to_vec(),
        })
    }
}

/// Whether every step of `h` respects `Δ`.
pub fn is_valid_history(sys: &TransitionSystem, h: &History) -> bool {
    let mut prev = h.start;
    for &(i, s) in &h.steps {
        if !sys.is_transition(prev, i, s) {
            return false;
        }
        prev = s;
    }
    true
}

/// Checks an alternating token sequence against `Δ`.
pub fn is_history<S: AsRef<str>>(sys: &TransitionSystem, tokens: &[S]) -> Result<bool> {
    let h = History::from_tokens(sys, tokens)?;
    Ok(is_valid_history(sys, &h))
}

/// `h1 ≈ h2`: same instructions and classwise-equal states.
pub fn histories_indistinguishable(sys: &TransitionSystem, h1: &History, h2: &History) -> Result<bool> {
    if !is_valid_history(sys, h1) || !is_valid_history(sys, h2) {
        return Err(Error::NotAHistory);
    }
    if h1.len() != h2.len() {
        return Ok(false);
    }
    let same_instrs = h1.steps.iter().zip(&h2.steps).all(|(a, b)| a.0 == b.0);
    let same_classes = h1
        .states()
        .zip(h2.states())
        .all(|(a, b)| sys.class_index(a) == sys.class_index(b));
    Ok(same_instrs && same_classes)
}

/// `h|_B` over an already-resolved class set.
pub fn truncate_to_classes(sys: &TransitionSystem, h: &History, goal: &ClassSet) -> History {
    let cut = h
        .states()
        .position(|s| goal.contains(&sys.class_index(s)))
        .unwrap_or(h.len());
    if cut == 0 {
        return h.clone();
    }
    History {
        start: h.steps[cut - 1].1,
        steps: h.steps[cut..].to_vec(),
    }
}

/// `h|_B`: the suffix starting at the first state whose class is in `B*`,
/// or the final state alone if there is none.
pub fn truncate_history(sys: &TransitionSystem, h: &History, views: &ViewSet) -> Result<History> {
    if !is_valid_history(sys, h) {
        return Err(Error::NotAHistory);
    }
    let goal = sys.star_set(views)?;
    Ok(truncate_to_classes(sys, h, &goal))
}
