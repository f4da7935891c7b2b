use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::system::{SystemBuilder, TransitionSystem};

/// Inclusive bounds for [`random_system`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomParams {
    pub states: (usize, usize),
    pub instructions: (usize, usize),
    pub max_classes: usize,
    pub max_class_size: usize,
    /// Successor-set size range for each `(state, instruction)`.
    pub branching: (usize, usize),
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            states: (1, 6),
            instructions: (1, 3),
            max_classes: 4,
            max_class_size: 3,
            branching: (1, 2),
        }
    }
}

impl RandomParams {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.to_string()));
        let range_ok = |(lo, hi): (usize, usize)| lo >= 1 && lo <= hi;
        if !range_ok(self.states) {
            return bad("state range must satisfy 1 <= lo <= hi");
        }
        if !range_ok(self.instructions) {
            return bad("instruction range must satisfy 1 <= lo <= hi");
        }
        if !range_ok(self.branching) {
            return bad("branching range must satisfy 1 <= lo <= hi");
        }
        if self.max_classes == 0 || self.max_class_size == 0 {
            return bad("class bounds must be positive");
        }
        if self.states.0 > self.max_classes * self.max_class_size {
            return bad("minimum state count does not fit the class bounds");
        }
        Ok(())
    }
}

/// A seeded random system with one view `v<k>` per class `k`.
///
/// States are `s0, s1, ...` and instructions `0, 1, ...`.
pub fn random_system(seed: u64, params: &RandomParams) -> Result<TransitionSystem> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = params.max_classes * params.max_class_size;
    let n = rng.gen_range(params.states.0..=params.states.1.min(cap));
    let k_lo = n.div_ceil(params.max_class_size);
    let k_hi = n.min(params.max_classes);
    let k = rng.gen_range(k_lo..=k_hi);

    let mut sizes = vec![1usize; k];
    for _ in k..n {
        let open: Vec<usize> = (0..k).filter(|&c| sizes[c] < params.max_class_size).collect();
        sizes[*open.choose(&mut rng).expect("capacity checked")] += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);

    let mut b = SystemBuilder::new(format!("random{seed}"));
    for s in 0..n {
        b.state(format!("s{s}"));
    }
    let mut next = 0;
    for size in sizes {
        b.obs(order[next..next + size].iter().map(|s| format!("s{s}")));
        next += size;
    }
    let m = rng.gen_range(params.instructions.0..=params.instructions.1);
    for i in 0..m {
        b.instruction(i.to_string());
    }
    for s in 0..n {
        for i in 0..m {
            let size = rng.gen_range(params.branching.0..=params.branching.1.min(n));
            let mut dsts = index::sample(&mut rng, n, size).into_vec();
            dsts.sort_unstable();
            b.edge(
                &format!("s{s}"),
                &i.to_string(),
                dsts.into_iter().map(|d| format!("s{d}")),
            );
        }
    }
    b.build()?.with_class_views("v")
}
