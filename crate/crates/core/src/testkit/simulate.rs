use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::navigation::Strategy;
use crate::system::{History, StateId, TransitionSystem};

/// Follows `strategy` from `start` for `steps` transitions, resolving
/// nondeterminism uniformly with a seeded generator.
pub fn simulate(
    sys: &TransitionSystem,
    strategy: &Strategy,
    start: StateId,
    steps: usize,
    seed: u64,
) -> Result<History> {
    strategy.validate(sys)?;
    if start >= sys.num_states() {
        return Err(Error::UnknownState(format!("#{start}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = History::new(start);
    let mut memory = match strategy {
        Strategy::Recall(m) => m.initial(sys.class_index(start)),
        Strategy::Memoryless(_) => 0,
    };
    let mut at = start;
    for _ in 0..steps {
        let instr = match strategy {
            Strategy::Memoryless(s) => s.choice(sys.class_index(at)),
            Strategy::Recall(m) => m.output(memory),
        };
        let succ = sys.successors(at, instr);
        let next = succ[rng.gen_range(0..succ.len())];
        if let Strategy::Recall(m) = strategy {
            memory = m.next(memory, sys.class_index(next));
        }
        h.push(instr, next);
        at = next;
    }
    Ok(h)
}
