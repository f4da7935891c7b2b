use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::system::{is_identifier, ClassId, InstrId, TransitionSystem};

/// A class-to-instruction map.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MemorylessStrategy {
    choice: Vec<InstrId>,
}

impl MemorylessStrategy {
    pub fn new(sys: &TransitionSystem, choice: Vec<InstrId>) -> Result<Self> {
        let s = MemorylessStrategy { choice };
        s.validate(sys)?;
        Ok(s)
    }

    /// The same instruction in every class.
    pub fn constant(sys: &TransitionSystem, instr: InstrId) -> Self {
        MemorylessStrategy {
            choice: vec![instr; sys.num_classes()],
        }
    }

    pub(crate) fn from_choice_unchecked(choice: Vec<InstrId>) -> Self {
        MemorylessStrategy { choice }
    }

    pub fn validate(&self, sys: &TransitionSystem) -> Result<()> {
        if self.choice.len() != sys.num_classes() {
            return Err(Error::PartialStrategy(format!(
                "strategy covers {} classes, system has {}",
                self.choice.len(),
                sys.num_classes()
            )));
        }
        if let Some(&bad) = self.choice.iter().find(|&&i| i >= sys.num_instructions()) {
            return Err(Error::PartialStrategy(format!("instruction index {bad} out of range")));
        }
        Ok(())
    }

    /// `s[w]` for a class.
    pub fn choice(&self, class: ClassId) -> InstrId {
        self.choice[class]
    }

    pub fn choices(&self) -> &[InstrId] {
        &self.choice
    }

    /// Lines of `map {<members>} <instr>`.
    pub fn to_text(&self, sys: &TransitionSystem) -> String {
        let mut out = String::new();
        for (c, &i) in self.choice.iter().enumerate() {
            let _ = writeln!(out, "map {} {}", sys.class_label(c), sys.instruction_name(i));
        }
        out
    }

    pub fn parse(sys: &TransitionSystem, text: &str) -> Result<Self> {
        let mut choice: Vec<Option<InstrId>> = vec![None; sys.num_classes()];
        for (line_no, fields) in directive_lines(text)? {
            let err = |m: &str| Error::Parse {
                line: line_no,
                message: m.to_string(),
            };
            match fields.as_slice() {
                [Field::Word(kw), Field::Class(members), Field::Word(instr)] if kw == "map" => {
                    let c = sys.class_by_members(members)?;
                    if choice[c].is_some() {
                        return Err(err("class mapped twice"));
                    }
                    choice[c] = Some(sys.instruction_id(instr)?);
                }
                _ => return Err(err("expected `map {<members>} <instr>`")),
            }
        }
        let choice = choice
            .into_iter()
            .enumerate()
            .map(|(c, i)| {
                i.ok_or_else(|| Error::PartialStrategy(format!("no instruction for class {}", sys.class_label(c))))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MemorylessStrategy { choice })
    }
}

/// A finite observation-driven memory machine standing for a recall
/// strategy. It reads only the sequence of observed classes, so it gives
/// the same instruction on indistinguishable histories.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RecallMachine {
    memories: Vec<String>,
    init: Vec<usize>,
    update: Vec<Vec<usize>>,
    output: Vec<InstrId>,
}

pub type MemoryId = usize;

impl RecallMachine {
    pub fn new(
        sys: &TransitionSystem,
        memories: Vec<String>,
        init: Vec<MemoryId>,
        update: Vec<Vec<MemoryId>>,
        output: Vec<InstrId>,
    ) -> Result<Self> {
        let m = RecallMachine {
            memories,
            init,
            update,
            output,
        };
        m.validate(sys)?;
        Ok(m)
    }

    pub(crate) fn from_parts_unchecked(
        memories: Vec<String>,
        init: Vec<MemoryId>,
        update: Vec<Vec<MemoryId>>,
        output: Vec<InstrId>,
    ) -> Self {
        RecallMachine {
            memories,
            init,
            update,
            output,
        }
    }

    pub fn validate(&self, sys: &TransitionSystem) -> Result<()> {
        let partial = |m: String| Err(Error::PartialStrategy(m));
        let n = self.memories.len();
        if n == 0 {
            return partial("machine has no memories".into());
        }
        if self.init.len() != sys.num_classes() {
            return partial("init is not defined on every class".into());
        }
        if self.output.len() != n || self.update.len() != n {
            return partial("output/update not defined on every memory".into());
        }
        if self.init.iter().any(|&m| m >= n) {
            return partial("init refers to an unknown memory".into());
        }
        if self.output.iter().any(|&i| i >= sys.num_instructions()) {
            return partial("output refers to an unknown instruction".into());
        }
        for row in &self.update {
            if row.len() != sys.num_classes() || row.iter().any(|&m| m >= n) {
                return partial("update is not total".into());
            }
        }
        Ok(())
    }

    /// Single instruction forever.
    pub fn constant(sys: &TransitionSystem, instr: InstrId) -> Self {
        RecallMachine {
            memories: vec!["m".into()],
            init: vec![0; sys.num_classes()],
            update: vec![vec![0; sys.num_classes()]],
            output: vec![instr],
        }
    }

    /// Lifts a memoryless strategy: the memory is the current class.
    pub fn from_memoryless(sys: &TransitionSystem, s: &MemorylessStrategy) -> Self {
        let k = sys.num_classes();
        RecallMachine {
            memories: (0..k).map(|c| format!("c{c}")).collect(),
            init: (0..k).collect(),
            update: vec![(0..k).collect(); k],
            output: s.choices().to_vec(),
        }
    }

    pub fn num_memories(&self) -> usize {
        self.memories.len()
    }

    pub fn memory_name(&self, m: MemoryId) -> &str {
        &self.memories[m]
    }

    pub fn memory_names(&self) -> &[String] {
        &self.memories
    }

    pub fn initial(&self, class: ClassId) -> MemoryId {
        self.init[class]
    }

    pub fn next(&self, m: MemoryId, observed: ClassId) -> MemoryId {
        self.update[m][observed]
    }

    pub fn output(&self, m: MemoryId) -> InstrId {
        self.output[m]
    }

    /// Machine file text. Each `init`/`upd` block uses a `*` row for its
    /// most frequent target when that saves lines.
    pub fn to_text(&self, sys: &TransitionSystem) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "memories {}", self.memories.join(" "));
        write_with_default(&mut out, sys, "init", "", &self.init, &self.memories);
        for (m, &i) in self.output.iter().enumerate() {
            let _ = writeln!(out, "out {} {}", self.memories[m], sys.instruction_name(i));
        }
        for (m, row) in self.update.iter().enumerate() {
            let prefix = format!("{} ", self.memories[m]);
            write_with_default(&mut out, sys, "upd", &prefix, row, &self.memories);
        }
        out
    }

    pub fn parse(sys: &TransitionSystem, text: &str) -> Result<Self> {
        let k = sys.num_classes();
        let mut memories: Option<Vec<String>> = None;
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut init: Vec<Option<usize>> = vec![None; k];
        let mut init_default: Option<usize> = None;
        let mut output: Vec<Option<InstrId>> = Vec::new();
        let mut update: Vec<Vec<Option<usize>>> = Vec::new();
        let mut update_default: Vec<Option<usize>> = Vec::new();

        for (line_no, fields) in directive_lines(text)? {
            let err = |m: &str| Error::Parse {
                line: line_no,
                message: m.to_string(),
            };
            let Some(Field::Word(kw)) = fields.first() else {
                return Err(err("expected a directive"));
            };
            if kw == "memories" {
                if memories.is_some() {
                    return Err(err("duplicate `memories` line"));
                }
                let mut names = Vec::new();
                for f in &fields[1..] {
                    let Field::Word(name) = f else {
                        return Err(err("memory names must be plain tokens"));
                    };
                    if !is_identifier(name) {
                        return Err(Error::InvalidIdentifier(name.clone()));
                    }
                    if index.insert(name.clone(), names.len()).is_some() {
                        return Err(Error::Duplicate {
                            kind: "memory",
                            name: name.clone(),
                        });
                    }
                    names.push(name.clone());
                }
                if names.is_empty() {
                    return Err(err("`memories` needs at least one name"));
                }
                output = vec![None; names.len()];
                update = vec![vec![None; k]; names.len()];
                update_default = vec![None; names.len()];
                memories = Some(names);
                continue;
            }
            if memories.is_none() {
                return Err(err("`memories` must come first"));
            }
            let memory = |name: &str| {
                index
                    .get(name)
                    .copied()
                    .ok_or_else(|| err(&format!("unknown memory `{name}`")))
            };
            match (kw.as_str(), &fields[1..]) {
                ("init", [class, Field::Word(m)]) => {
                    let target = memory(m)?;
                    match class {
                        Field::Star => set_once(&mut init_default, target, || err("duplicate `init *`"))?,
                        Field::Class(members) => {
                            let c = sys.class_by_members(members)?;
                            set_once(&mut init[c], target, || err("class initialised twice"))?;
                        }
                        Field::Word(_) => return Err(err("expected `{<members>}` or `*`")),
                    }
                }
                ("out", [Field::Word(m), Field::Word(instr)]) => {
                    let mi = memory(m)?;
                    let i = sys.instruction_id(instr)?;
                    set_once(&mut output[mi], i, || err("duplicate `out`"))?;
                }
                ("upd", [Field::Word(m), class, Field::Word(to)]) => {
                    let mi = memory(m)?;
                    let target = memory(to)?;
                    match class {
                        Field::Star => set_once(&mut update_default[mi], target, || err("duplicate `upd * `"))?,
                        Field::Class(members) => {
                            let c = sys.class_by_members(members)?;
                            set_once(&mut update[mi][c], target, || err("duplicate `upd` row"))?;
                        }
                        Field::Word(_) => return Err(err("expected `{<members>}` or `*`")),
                    }
                }
                _ => return Err(err("expected `init`, `out` or `upd` line")),
            }
        }

        let memories = memories.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing `memories` line".into(),
        })?;
        let partial = |what: String| Error::PartialStrategy(what);
        let init = init
            .into_iter()
            .enumerate()
            .map(|(c, m)| {
                m.or(init_default)
                    .ok_or_else(|| partial(format!("no init for {}", sys.class_label(c))))
            })
            .collect::<Result<Vec<_>>>()?;
        let output = output
            .into_iter()
            .enumerate()
            .map(|(m, i)| i.ok_or_else(|| partial(format!("no output for memory `{}`", memories[m]))))
            .collect::<Result<Vec<_>>>()?;
        let update = update
            .into_iter()
            .enumerate()
            .map(|(m, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(c, t)| {
                        t.or(update_default[m]).ok_or_else(|| {
                            partial(format!(
                                "no update for memory `{}` on {}",
                                memories[m],
                                sys.class_label(c)
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        RecallMachine::new(sys, memories, init, update, output)
    }
}

fn set_once<T>(slot: &mut Option<T>, value: T, dup: impl FnOnce() -> Error) -> Result<()> {
    if slot.is_some() {
        return Err(dup());
    }
    *slot = Some(value);
    Ok(())
}

fn write_with_default(
    out: &mut String,
    sys: &TransitionSystem,
    keyword: &str,
    prefix: &str,
    row: &[usize],
    names: &[String],
) {
    let mut counts = vec![0usize; names.len()];
    for &t in row {
        counts[t] += 1;
    }
    // most frequent target, lowest index on ties
    let (best, &best_count) = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("nonempty");
    let default = (best_count >= 2).then_some(best);
    for (c, &t) in row.iter().enumerate() {
        if Some(t) != default {
            let _ = writeln!(out, "{keyword} {prefix}{} {}", sys.class_label(c), names[t]);
        }
    }
    if let Some(d) = default {
        let _ = writeln!(out, "{keyword} {prefix}* {}", names[d]);
    }
}

/// A memoryless strategy or a recall machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    Memoryless(MemorylessStrategy),
    Recall(RecallMachine),
}

impl Strategy {
    pub fn validate(&self, sys: &TransitionSystem) -> Result<()> {
        match self {
            Strategy::Memoryless(s) => s.validate(sys),
            Strategy::Recall(m) => m.validate(sys),
        }
    }

    pub fn to_text(&self, sys: &TransitionSystem) -> String {
        match self {
            Strategy::Memoryless(s) => s.to_text(sys),
            Strategy::Recall(m) => m.to_text(sys),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Field {
    Word(String),
    Class(Vec<String>),
    Star,
}

/// Splits non-comment lines into words, `*`, and `{...}` groups.
pub(crate) fn directive_lines(text: &str) -> Result<Vec<(usize, Vec<Field>)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = Vec::new();
        let mut rest = line;
        while !rest.is_empty() {
            if let Some(after) = rest.strip_prefix('{') {
                let close = after.find('}').ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: "unbalanced `{`".into(),
                })?;
                let members: Vec<String> = after[..close]
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect();
                if members.is_empty() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "empty class".into(),
                    });
                }
                fields.push(Field::Class(members));
                rest = after[close + 1..].trim_start();
            } else {
                let end = rest.find(|c: char| c.is_whitespace() || c == '{').unwrap_or(rest.len());
                let word = &rest[..end];
                fields.push(if word == "*" {
                    Field::Star
                } else {
                    Field::Word(word.to_string())
                });
                rest = rest[end..].trim_start();
            }
        }
        out.push((line_no, fields));
    }
    Ok(out)
}
