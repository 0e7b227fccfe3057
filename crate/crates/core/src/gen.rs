//! Random well-formed instances for self-checks and tests.
//!
//! Everything here is driven by a caller-supplied RNG, so suites that need
//! reproducibility can seed one and get the same instances back. Rational
//! entries are built as `k / sum` with small nonnegative numerators, which
//! keeps arithmetic exact and denominators tame.

use rand::Rng;

use crate::algebra::{Event, MixedState, Observable, StateSpace};
use crate::causality::{CausalFamily, CausalTree, EdgeOp, MarkovOperator};
use crate::scalar::Scalar;

/// A random exact probability vector of length `n` (entries may be zero).
pub fn weights<R: Rng>(rng: &mut R, n: usize) -> Vec<Scalar> {
    loop {
        let nums: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=9)).collect();
        let sum: i64 = nums.iter().sum();
        if sum > 0 {
            return nums
                .into_iter()
                .map(|k| Scalar::ratio(k, sum).expect("sum is positive"))
                .collect();
        }
    }
}

/// A random exact probability vector with every entry strictly positive.
pub fn positive_weights<R: Rng>(rng: &mut R, n: usize) -> Vec<Scalar> {
    let nums: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=9)).collect();
    let sum: i64 = nums.iter().sum();
    nums.into_iter().map(|k| Scalar::ratio(k, sum).expect("sum is positive")).collect()
}

/// A state space with 1..=`max_points` points labeled `{prefix}1`,
/// `{prefix}2`, ...
pub fn space<R: Rng>(rng: &mut R, prefix: &str, max_points: usize) -> StateSpace {
    let n = rng.gen_range(1..=max_points.max(1));
    StateSpace::new((1..=n).map(|i| format!("{prefix}{i}"))).expect("labels are distinct")
}

pub fn state<R: Rng>(rng: &mut R, space: &StateSpace) -> MixedState {
    MixedState::new(space.clone(), weights(rng, space.len())).expect("weights are valid")
}

/// A random observable on `space` with 1..=`max_outcomes` outcomes: each
/// column is an independent stochastic vector, so the axioms hold by
/// construction.
pub fn observable<R: Rng>(rng: &mut R, space: &StateSpace, max_outcomes: usize) -> Observable {
    let k = rng.gen_range(1..=max_outcomes.max(1));
    let columns: Vec<Vec<Scalar>> = (0..space.len()).map(|_| weights(rng, k)).collect();
    let effects = (0..k)
        .map(|x| columns.iter().map(|col| col[x].clone()).collect())
        .collect();
    Observable::new(space.clone(), (1..=k).map(|i| format!("x{i}")), effects)
        .expect("columns are stochastic")
}

/// A random subset of the observable's outcomes.
pub fn event<R: Rng>(rng: &mut R, obs: &Observable) -> Event {
    obs.outcomes().iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()
}

/// A random Markov operator between two given spaces.
pub fn markov<R: Rng>(rng: &mut R, source: &StateSpace, target: &StateSpace) -> MarkovOperator {
    let matrix = (0..source.len()).map(|_| weights(rng, target.len())).collect();
    MarkovOperator::new(source.clone(), target.clone(), matrix).expect("rows are stochastic")
}

/// A random linear causal chain t0 → t1 → ... of depth 1..=`max_depth`
/// (edge count), with spaces of 1..=`max_points` points.
pub fn chain<R: Rng>(rng: &mut R, max_depth: usize, max_points: usize) -> CausalFamily {
    let depth = rng.gen_range(1..=max_depth.max(1));
    let spaces: Vec<StateSpace> =
        (0..=depth).map(|i| space(rng, &format!("t{i}p"), max_points)).collect();
    let nodes: Vec<(String, StateSpace)> =
        spaces.iter().enumerate().map(|(i, s)| (format!("t{i}"), s.clone())).collect();
    let edges: Vec<(String, String)> =
        (0..depth).map(|i| (format!("t{i}"), format!("t{}", i + 1))).collect();
    let tree = CausalTree::new(nodes, edges).expect("a chain is a tree");
    let edge_ops = (0..depth)
        .map(|i| {
            let op = markov(rng, &spaces[i], &spaces[i + 1]);
            EdgeOp {
                parent: format!("t{i}"),
                child: format!("t{}", i + 1),
                matrix: op.matrix().iter().flatten().cloned().collect(),
            }
        })
        .collect();
    CausalFamily::new(tree, edge_ops).expect("operators match the chain")
}
