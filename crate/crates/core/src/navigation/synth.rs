use std::collections::BTreeMap;

use super::check::{memoryless_visits, recall_visits};
use super::strategy::{MemoryId, MemorylessStrategy, RecallMachine};
use super::Budget;
use crate::error::{Error, Result};
use crate::system::{ClassId, ClassSet, InstrId, TransitionSystem, ViewSet};

fn strategy_space(sys: &TransitionSystem) -> u128 {
    (sys.num_instructions() as u128)
        .checked_pow(sys.num_classes() as u32)
        .unwrap_or(u128::MAX)
}

/// Total number of nonempty single-class beliefs.
pub fn belief_count(sys: &TransitionSystem) -> u128 {
    (0..sys.num_classes())
        .map(|c| {
            let n = sys.class_members(c).len() as u32;
            if n >= 127 {
                u128::MAX
            } else {
                (1u128 << n) - 1
            }
        })
        .fold(0u128, u128::saturating_add)
}

pub(crate) fn check_strategy_budget(sys: &TransitionSystem, budget: &Budget) -> Result<()> {
    let needed = strategy_space(sys);
    if needed > budget.strategies {
        return Err(Error::BudgetExceeded {
            what: "memoryless strategy space",
            needed,
            bound: budget.strategies,
        });
    }
    Ok(())
}

/// Beliefs are stored as `u64` masks over class members.
const MAX_BELIEF_CLASS: usize = 63;

pub(crate) fn check_belief_budget(sys: &TransitionSystem, budget: &Budget) -> Result<()> {
    let widest = (0..sys.num_classes())
        .map(|c| sys.class_members(c).len())
        .max()
        .unwrap_or(0);
    if widest > MAX_BELIEF_CLASS {
        return Err(Error::BudgetExceeded {
            what: "observation class size",
            needed: widest as u128,
            bound: MAX_BELIEF_CLASS as u128,
        });
    }
    let needed = belief_count(sys);
    if needed > budget.beliefs {
        return Err(Error::BudgetExceeded {
            what: "belief space",
            needed,
            bound: budget.beliefs,
        });
    }
    Ok(())
}

/// Classes whose choice can influence a goal-avoiding run: reachable from
/// `from \ to` through non-goal classes, and not choice-invariant.
fn relevant_classes(sys: &TransitionSystem, from: &ClassSet, to: &ClassSet) -> Vec<ClassId> {
    let mut seen = vec![false; sys.num_classes()];
    let mut stack: Vec<ClassId> = from.iter().copied().filter(|c| !to.contains(c)).collect();
    for &c in &stack {
        seen[c] = true;
    }
    while let Some(c) = stack.pop() {
        for &w in sys.class_members(c) {
            for i in 0..sys.num_instructions() {
                for &v in sys.successors(w, i) {
                    let d = sys.class_index(v);
                    if !seen[d] && !to.contains(&d) {
                        seen[d] = true;
                        stack.push(d);
                    }
                }
            }
        }
    }
    let invariant = |c: ClassId| {
        sys.class_members(c)
            .iter()
            .all(|&w| (1..sys.num_instructions()).all(|i| sys.successors(w, i) == sys.successors(w, 0)))
    };
    (0..sys.num_classes()).filter(|&c| seen[c] && !invariant(c)).collect()
}

/// First passing class-to-instruction map in lexicographic order (earlier
/// classes most significant, instructions in declaration order).
///
/// Classes that cannot affect the outcome are pinned to the first
/// instruction; this visits the same first witness as the full
/// enumeration because lowering an irrelevant coordinate keeps a witness a
/// witness and only moves it earlier.
pub fn synth_memoryless_classes(
    sys: &TransitionSystem,
    from: &ClassSet,
    to: &ClassSet,
    budget: &Budget,
) -> Result<Option<MemorylessStrategy>> {
    check_strategy_budget(sys, budget)?;
    let relevant = relevant_classes(sys, from, to);
    let n_instr = sys.num_instructions();
    let mut choice = vec![0; sys.num_classes()];
    loop {
        let s = MemorylessStrategy::from_choice_unchecked(choice.clone());
        if memoryless_visits(sys, &s, from, to) {
            return Ok(Some(s));
        }
        // odometer, last relevant class fastest
        let mut k = relevant.len();
        loop {
            if k == 0 {
                return Ok(None);
            }
            k -= 1;
            let c = relevant[k];
            choice[c] += 1;
            if choice[c] < n_instr {
                break;
            }
            choice[c] = 0;
        }
    }
}

pub fn synth_memoryless(
    sys: &TransitionSystem,
    from: &ViewSet,
    to: &ViewSet,
    budget: &Budget,
) -> Result<Option<MemorylessStrategy>> {
    let (a, b) = (sys.star_set(from)?, sys.star_set(to)?);
    synth_memoryless_classes(sys, &a, &b, budget)
}

/// Dense indexing of all nonempty subsets of each class.
pub(crate) struct BeliefSpace {
    offsets: Vec<usize>,
    position: Vec<usize>,
    total: usize,
}

impl BeliefSpace {
    pub(crate) fn new(sys: &TransitionSystem) -> Self {
        let mut offsets = Vec::with_capacity(sys.num_classes());
        let mut position = vec![0; sys.num_states()];
        let mut total = 0usize;
        for c in 0..sys.num_classes() {
            offsets.push(total);
            let members = sys.class_members(c);
            for (k, &w) in members.iter().enumerate() {
                position[w] = k;
            }
            total += (1usize << members.len()) - 1;
        }
        BeliefSpace {
            offsets,
            position,
            total,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.total
    }

    pub(crate) fn id(&self, class: ClassId, mask: u64) -> usize {
        self.offsets[class] + mask as usize - 1
    }

    pub(crate) fn full(&self, sys: &TransitionSystem, class: ClassId) -> usize {
        self.id(class, (1u64 << sys.class_members(class).len()) - 1)
    }

    pub(crate) fn decode(&self, id: usize) -> (ClassId, u64) {
        let class = self.offsets.partition_point(|&o| o <= id) - 1;
        (class, (id - self.offsets[class] + 1) as u64)
    }

    pub(crate) fn states<'a>(
        &self,
        sys: &'a TransitionSystem,
        class: ClassId,
        mask: u64,
    ) -> impl Iterator<Item = usize> + 'a {
        sys.class_members(class)
            .iter()
            .enumerate()
            .filter(move |(k, _)| mask >> k & 1 == 1)
            .map(|(_, &w)| w)
    }

    /// Successor beliefs `Δ_i(b) ∩ c` for every class `c` they meet.
    pub(crate) fn successors(
        &self,
        sys: &TransitionSystem,
        class: ClassId,
        mask: u64,
        instr: InstrId,
    ) -> Vec<(ClassId, u64)> {
        let mut split: BTreeMap<ClassId, u64> = BTreeMap::new();
        for w in self.states(sys, class, mask) {
            for &v in sys.successors(w, instr) {
                *split.entry(sys.class_index(v)).or_default() |= 1u64 << self.position[v];
            }
        }
        split.into_iter().collect()
    }
}

/// Winning region of the knowledge game, with rank and chosen instruction
/// per winning belief.
pub(crate) struct BeliefFixpoint {
    pub(crate) space: BeliefSpace,
    pub(crate) rank: Vec<u32>,
    pub(crate) choice: Vec<InstrId>,
}

pub(crate) const LOSING: u32 = u32::MAX;

impl BeliefFixpoint {
    pub(crate) fn compute(sys: &TransitionSystem, to: &ClassSet) -> Self {
        let space = BeliefSpace::new(sys);
        let mut rank = vec![LOSING; space.len()];
        let mut choice = vec![0; space.len()];
        for &c in to {
            let n = sys.class_members(c).len();
            for mask in 1..(1u64 << n) {
                rank[space.id(c, mask)] = 0;
            }
        }
        let mut level = 0u32;
        loop {
            let mut entered = Vec::new();
            for b in 0..space.len() {
                if rank[b] != LOSING {
                    continue;
                }
                let (c, mask) = space.decode(b);
                for i in 0..sys.num_instructions() {
                    let ok = space
                        .successors(sys, c, mask, i)
                        .into_iter()
                        .all(|(d, m)| rank[space.id(d, m)] <= level);
                    if ok {
                        entered.push((b, i));
                        break;
                    }
                }
            }
            if entered.is_empty() {
                break;
            }
            level += 1;
            for (b, i) in entered {
                rank[b] = level;
                choice[b] = i;
            }
        }
        BeliefFixpoint { space, rank, choice }
    }

    pub(crate) fn wins_class(&self, sys: &TransitionSystem, class: ClassId) -> bool {
        self.rank[self.space.full(sys, class)] != LOSING
    }
}

/// Belief-based recall synthesis.
///
/// Memories are the winning beliefs of positive rank plus an absorbing
/// `done`. A belief outputs the instruction that put it into the winning
/// region, and is updated to `Δ_i(b) ∩ c` on observing class `c`.
pub fn synth_recall_classes(
    sys: &TransitionSystem,
    from: &ClassSet,
    to: &ClassSet,
    budget: &Budget,
) -> Result<Option<RecallMachine>> {
    check_belief_budget(sys, budget)?;
    let fix = BeliefFixpoint::compute(sys, to);
    if !from.iter().all(|&c| fix.wins_class(sys, c)) {
        return Ok(None);
    }
    let space = &fix.space;

    const DONE: MemoryId = 0;
    let mut memory_of = vec![DONE; space.len()];
    let mut beliefs = Vec::new();
    let mut names = vec!["done".to_string()];
    for (b, &rank) in fix.rank.iter().enumerate() {
        if rank != LOSING && rank > 0 {
            memory_of[b] = names.len();
            names.push(format!("b{}", beliefs.len()));
            beliefs.push(b);
        }
    }

    let k = sys.num_classes();
    let init: Vec<MemoryId> = (0..k).map(|c| memory_of[space.full(sys, c)]).collect();
    let mut output = vec![0; names.len()];
    let mut update = vec![vec![DONE; k]; names.len()];
    for (slot, &b) in beliefs.iter().enumerate() {
        let mem = slot + 1;
        let (c, mask) = space.decode(b);
        let instr = fix.choice[b];
        output[mem] = instr;
        for (d, m) in space.successors(sys, c, mask, instr) {
            let next = space.id(d, m);
            debug_assert!(fix.rank[next] < fix.rank[b]);
            update[mem][d] = memory_of[next];
        }
    }
    let machine = RecallMachine::from_parts_unchecked(names, init, update, output);
    debug_assert!(recall_visits(sys, &machine, from, to));
    Ok(Some(machine))
}

pub fn synth_recall(
    sys: &TransitionSystem,
    from: &ViewSet,
    to: &ViewSet,
    budget: &Budget,
) -> Result<Option<RecallMachine>> {
    let (a, b) = (sys.star_set(from)?, sys.star_set(to)?);
    synth_recall_classes(sys, &a, &b, budget)
}

/// Runs `first` until a class in `switch` is observed (possibly at the
/// start), then runs `second` as if the walk had begun there.
pub fn compose_recall_classes(
    sys: &TransitionSystem,
    first: &RecallMachine,
    second: &RecallMachine,
    switch: &ClassSet,
) -> RecallMachine {
    let n1 = first.num_memories();
    let n2 = second.num_memories();
    let names: Vec<String> = first
        .memory_names()
        .iter()
        .map(|n| format!("l.{n}"))
        .chain(second.memory_names().iter().map(|n| format!("r.{n}")))
        .collect();
    let k = sys.num_classes();
    let enter = |c: ClassId| n1 + second.initial(c);
    let init = (0..k)
        .map(|c| {
            if switch.contains(&c) {
                enter(c)
            } else {
                first.initial(c)
            }
        })
        .collect();
    let mut update = Vec::with_capacity(n1 + n2);
    for m in 0..n1 {
        update.push(
            (0..k)
                .map(|c| {
                    if switch.contains(&c) {
                        enter(c)
                    } else {
                        first.next(m, c)
                    }
                })
                .collect(),
        );
    }
    for m in 0..n2 {
        update.push((0..k).map(|c| n1 + second.next(m, c)).collect());
    }
    let output = (0..n1)
        .map(|m| first.output(m))
        .chain((0..n2).map(|m| second.output(m)))
        .collect();
    RecallMachine::from_parts_unchecked(names, init, update, output)
}

pub fn compose_recall(
    sys: &TransitionSystem,
    first: &RecallMachine,
    second: &RecallMachine,
    switch: &ViewSet,
) -> Result<RecallMachine> {
    first.validate(sys)?;
    second.validate(sys)?;
    let b = sys.star_set(switch)?;
    Ok(compose_recall_classes(sys, first, second, &b))
}
