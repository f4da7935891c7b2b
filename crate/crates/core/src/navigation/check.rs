use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use super::strategy::{MemorylessStrategy, RecallMachine};
use crate::error::Result;
use crate::system::{ClassSet, StateId, TransitionSystem, ViewSet};

/// Decides whether every infinite path from `starts` visits a goal node.
///
/// Every node must have at least one successor. Explores the goal-avoiding
/// part reachable from non-goal starts and reports `false` iff it contains
/// a cycle, i.e. a reachable goal-avoiding lasso.
pub(crate) fn all_paths_visit<N, S, G, F>(starts: S, goal: G, mut successors: F) -> bool
where
    N: Copy + Eq + Hash,
    S: IntoIterator<Item = N>,
    G: Fn(N) -> bool,
    F: FnMut(N, &mut Vec<N>),
{
    let mut index: HashMap<N, usize> = HashMap::new();
    let mut nodes: Vec<N> = Vec::new();
    let mut queue = VecDeque::new();
    for s in starts {
        if !goal(s) && !index.contains_key(&s) {
            index.insert(s, nodes.len());
            nodes.push(s);
            queue.push_back(s);
        }
    }
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut buf = Vec::new();
    while let Some(n) = queue.pop_front() {
        buf.clear();
        successors(n, &mut buf);
        let mut out = Vec::new();
        for &m in &buf {
            if goal(m) {
                continue;
            }
            let id = *index.entry(m).or_insert_with(|| {
                nodes.push(m);
                queue.push_back(m);
                nodes.len() - 1
            });
            out.push(id);
        }
        edges.push(out);
    }

    // Kahn: peel nodes with no remaining out-edges; leftovers lie on or lead to a cycle
    let n = nodes.len();
    let mut out_degree: Vec<usize> = edges.iter().map(Vec::len).collect();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (u, outs) in edges.iter().enumerate() {
        for &v in outs {
            preds[v].push(u);
        }
    }
    let mut stack: Vec<usize> = (0..n).filter(|&u| out_degree[u] == 0).collect();
    let mut removed = 0;
    while let Some(v) = stack.pop() {
        removed += 1;
        for &u in &preds[v] {
            out_degree[u] -= 1;
            if out_degree[u] == 0 {
                stack.push(u);
            }
        }
    }
    removed == n
}

pub(crate) fn memoryless_visits(
    sys: &TransitionSystem,
    s: &MemorylessStrategy,
    from: &ClassSet,
    to: &ClassSet,
) -> bool {
    let starts = (0..sys.num_states()).filter(|&w| from.contains(&sys.class_index(w)));
    all_paths_visit(
        starts,
        |w: StateId| to.contains(&sys.class_index(w)),
        |w, out| out.extend_from_slice(sys.successors(w, s.choice(sys.class_index(w)))),
    )
}

pub(crate) fn recall_visits(sys: &TransitionSystem, m: &RecallMachine, from: &ClassSet, to: &ClassSet) -> bool {
    let starts = (0..sys.num_states())
        .filter(|&w| from.contains(&sys.class_index(w)))
        .map(|w| (w, m.initial(sys.class_index(w))));
    all_paths_visit(
        starts,
        |(w, _)| to.contains(&sys.class_index(w)),
        |(w, mem), out| {
            for &v in sys.successors(w, m.output(mem)) {
                out.push((v, m.next(mem, sys.class_index(v))));
            }
        },
    )
}

/// Whether `s` forces every path starting in `A*` to visit `B*`.
pub fn check_memoryless_witness(
    sys: &TransitionSystem,
    s: &MemorylessStrategy,
    from: &ViewSet,
    to: &ViewSet,
) -> Result<bool> {
    s.validate(sys)?;
    let (a, b) = (sys.star_set(from)?, sys.star_set(to)?);
    Ok(memoryless_visits(sys, s, &a, &b))
}

/// Same as [`check_memoryless_witness`] on the state × memory product.
pub fn check_recall_witness(sys: &TransitionSystem, m: &RecallMachine, from: &ViewSet, to: &ViewSet) -> Result<bool> {
    m.validate(sys)?;
    let (a, b) = (sys.star_set(from)?, sys.star_set(to)?);
    Ok(recall_visits(sys, m, &a, &b))
}
