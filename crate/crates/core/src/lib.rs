//! Measurement theory over finite state spaces, with exact rational
//! arithmetic.
//!
//! The library models observables on a finite set of states, the two
//! classical inference rules for a single observed outcome (maximum
//! likelihood and Bayesian updating), sequential composition through Markov
//! operators on a causal tree, and the reduction of a uniformly weighted
//! family of symmetry-related observables to a single measurement under the
//! uniform state. The `problems` module instantiates all of it for the
//! Monty Hall and three-prisoners puzzles, and `sim` cross-checks the exact
//! answers against a seeded Monte Carlo oracle.
//!
//! All kernel arithmetic is exact ([`Scalar`] wraps an arbitrary-precision
//! rational); floating point appears only in simulation statistics and
//! display.

pub mod algebra;
pub mod causality;
pub mod error;
pub mod gen;
pub mod inference;
pub mod problems;
pub mod scalar;
pub mod sim;
pub mod symmetry;

pub use algebra::{
    Event, MeasurementSession, MixedState, Observable, OutcomeDistribution, StateSpace, StateSpec,
};
pub use causality::{CausalFamily, CausalTree, EdgeOp, MarkovOperator};
pub use error::{Diagnostic, Error, Result};
pub use inference::{
    bayes_posterior, fisher_mle, pure_probability, statistical_indistinguishability_check,
    statistical_probability, BayesResult, FisherResult,
};
pub use problems::{
    MontyHallSpec, PrisonersSpec, ProblemSpec, Variant, Verdict, VerdictKind, VerdictRecord,
};
pub use scalar::Scalar;
pub use sim::{Comparison, SimConfig, SimReport};
pub use symmetry::{orbit_observable, Bijection, WeightedObservableFamily};
