//! Error taxonomy shared across the library.

use serde::Serialize;
use thiserror::Error;

use crate::scalar::Scalar;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scalar: {0}")]
    InvalidScalar(String),

    #[error("empty state space")]
    EmptySpace,

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown state label `{0}`")]
    UnknownLabel(String),

    #[error("unknown outcome label `{0}`")]
    UnknownOutcome(String),

    #[error("negative weight in {context}")]
    NegativeWeight { context: String },

    #[error("weights in {context} sum to {sum}, expected 1")]
    WeightSumNotOne { context: String, sum: Scalar },

    #[error("effect for outcome `{outcome}` at state `{point}` is negative: {value}")]
    NegativeEffect { outcome: String, point: String, value: Scalar },

    #[error("effects at state `{point}` sum to {sum}, expected 1")]
    ColumnNotNormalized { point: String, sum: Scalar },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("state spaces differ: {0}")]
    SpaceMismatch(String),

    #[error("measurement session already consumed; a measurement is performed only once")]
    SessionConsumed,

    #[error("state is unknown; no outcome distribution is computable")]
    StateUnknown,

    #[error("event has zero likelihood at every state; no maximum-likelihood inference possible")]
    ZeroLikelihoodEverywhere,

    #[error("event has zero prior probability; posterior is undefined")]
    ZeroEvidence,

    #[error("matrix is not Markov: {0}")]
    NotMarkov(String),

    #[error("malformed causal tree: {0}")]
    MalformedTree(String),

    #[error("unknown tree node `{0}`")]
    UnknownNode(String),

    #[error("nodes `{0}` and `{1}` are not causally comparable")]
    NotComparable(String, String),

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("mapping is not a bijection: {0}")]
    NotBijective(String),

    #[error("family weights are not uniform; the equal-probability reduction requires weight 1/n on each member")]
    NotUniformWeights,

    #[error("mixture depends on the designated state; no state-independent reduction exists for this family")]
    StateDependentReduction,

    #[error("alpha must satisfy 0 < alpha < 1, got {0}")]
    InvalidAlpha(Scalar),

    #[error("invalid problem spec: {0}")]
    InvalidProblemSpec(String),

    #[error("prior supplied but the fisher variant is prior-free")]
    PriorSuppliedForFisher,

    #[error("prior supplied but the equal-probability variant derives its own prior")]
    PriorSuppliedForEqualProbability,

    #[error("the bayes variant requires a prior")]
    PriorRequired,

    #[error("spec variant is `{expected}` but `{requested}` was requested")]
    VariantMismatch { expected: String, requested: String },

    #[error("simulation needs at least one trial")]
    ZeroTrials,

    #[error("no trials produced utterance `{0}`; cannot condition on it")]
    NoConditioningEvents(String),

    #[error("malformed input: {0}")]
    MalformedInput(String),
}

impl Error {
    /// Stable machine-readable code for the CLI's stderr diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidScalar(_) => "invalid_scalar",
            Error::EmptySpace => "empty_space",
            Error::DuplicateLabel(_) => "duplicate_label",
            Error::UnknownLabel(_) => "unknown_label",
            Error::UnknownOutcome(_) => "unknown_outcome",
            Error::NegativeWeight { .. } => "negative_weight",
            Error::WeightSumNotOne { .. } => "weight_sum_not_one",
            Error::NegativeEffect { .. } => "negative_effect",
            Error::ColumnNotNormalized { .. } => "column_not_normalized",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::SpaceMismatch(_) => "space_mismatch",
            Error::SessionConsumed => "session_consumed",
            Error::StateUnknown => "state_unknown",
            Error::ZeroLikelihoodEverywhere => "zero_likelihood_everywhere",
            Error::ZeroEvidence => "zero_evidence",
            Error::NotMarkov(_) => "not_markov",
            Error::MalformedTree(_) => "malformed_tree",
            Error::UnknownNode(_) => "unknown_node",
            Error::NotComparable(_, _) => "not_comparable",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::NotBijective(_) => "not_bijective",
            Error::NotUniformWeights => "not_uniform_weights",
            Error::StateDependentReduction => "state_dependent_reduction",
            Error::InvalidAlpha(_) => "invalid_alpha",
            Error::InvalidProblemSpec(_) => "invalid_problem_spec",
            Error::PriorSuppliedForFisher => "prior_supplied_for_fisher",
            Error::PriorSuppliedForEqualProbability => "prior_supplied_for_equal_probability",
            Error::PriorRequired => "prior_required",
            Error::VariantMismatch { .. } => "variant_mismatch",
            Error::ZeroTrials => "zero_trials",
            Error::NoConditioningEvents(_) => "no_conditioning_events",
            Error::MalformedInput(_) => "malformed_input",
        }
    }

    /// True for conditions where an inference is well-formed but degenerate:
    /// the question cannot be answered rather than being ill-typed.
    pub fn is_degenerate_inference(&self) -> bool {
        matches!(
            self,
            Error::ZeroEvidence
                | Error::ZeroLikelihoodEverywhere
                | Error::NoConditioningEvents(_)
                | Error::StateUnknown
        )
    }

    /// Machine-readable JSON object for stderr diagnostics.
    pub fn to_diagnostic(&self) -> Diagnostic {
        Diagnostic { error: self.code().to_string(), message: self.to_string() }
    }
}

#[derive(Debug, Serialize)]
pub struct Diagnostic {
    pub error: String,
    pub message: String,
}
