//! State spaces, states, observables, and one-shot measurement sessions.
//!
//! A finite state space carries two kinds of objects: mixed states
//! (probability weights over the points, with point masses as the pure
//! states) and observables (an outcome set together with one effect per
//! outcome, i.e. a `[0,1]`-valued function on the space). The defining
//! axioms are enforced at construction time: effects are nonnegative and
//! the effects at each state sum to exactly 1, so `F(∅) = 0`, `F(X) = 1`,
//! and additivity over disjoint events hold by arithmetic.
//!
//! A [`MeasurementSession`] pairs an observable with what is known about
//! the state and yields its outcome distribution at most once; a
//! measurement cannot be repeated on the same system.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug)]
struct SpaceInner {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

/// A finite set of distinguishable states, ordered as given.
#[derive(Clone, Debug)]
pub struct StateSpace {
    inner: Arc<SpaceInner>,
}

impl StateSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(StateSpace { inner: Arc::new(SpaceInner { labels, index }) })
    }

    pub fn len(&self) -> usize {
        self.inner.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.inner.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.inner.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.inner.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.inner.index.contains_key(label)
    }
}

impl PartialEq for StateSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.labels == other.inner.labels
    }
}

impl Eq for StateSpace {}

/// Validates a weight vector: nonnegative entries summing to exactly 1.
pub(crate) fn check_weights(weights: &[Scalar], context: &str) -> Result<()> {
    if weights.iter().any(Scalar::is_negative) {
        return Err(Error::NegativeWeight { context: context.to_string() });
    }
    let sum: Scalar = weights.iter().sum();
    if !sum.is_one() {
        return Err(Error::WeightSumNotOne { context: context.to_string(), sum });
    }
    Ok(())
}

/// A probability distribution over the points of a space. Point masses are
/// the pure states; everything else is a proper mixture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedState {
    space: StateSpace,
    weights: Vec<Scalar>,
}

impl MixedState {
    pub fn new(space: StateSpace, weights: Vec<Scalar>) -> Result<Self> {
        if weights.len() != space.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for a {}-point space",
                weights.len(),
                space.len()
            )));
        }
        check_weights(&weights, "mixed state")?;
        Ok(MixedState { space, weights })
    }

    /// The pure state δ_ω concentrated at one point.
    pub fn point(space: StateSpace, label: &str) -> Result<Self> {
        let i = space.require(label)?;
        let mut weights = vec![Scalar::zero(); space.len()];
        weights[i] = Scalar::one();
        Ok(MixedState { space, weights })
    }

    pub fn uniform(space: StateSpace) -> Self {
        let n = space.len();
        let w = Scalar::ratio(1, n as i64).expect("space is nonempty");
        MixedState { space, weights: vec![w; n] }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn weights(&self) -> &[Scalar] {
        &self.weights
    }

    pub fn weight(&self, label: &str) -> Result<&Scalar> {
        Ok(&self.weights[self.space.require(label)?])
    }

    /// ⟨ν, f⟩ for a function given pointwise in space order.
    pub fn pair(&self, f: &[Scalar]) -> Result<Scalar> {
        if f.len() != self.weights.len() {
            return Err(Error::DimensionMismatch(format!(
                "function has {} values for a {}-point space",
                f.len(),
                self.weights.len()
            )));
        }
        Ok(self.weights.iter().zip(f).map(|(w, v)| w * v).sum())
    }
}

/// A set of outcome labels; the event field is the full power set, so any
/// subset of an observable's outcomes is measurable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Event(BTreeSet<String>);

impl Event {
    pub fn empty() -> Self {
        Event(BTreeSet::new())
    }

    pub fn singleton(label: impl Into<String>) -> Self {
        Event(std::iter::once(label.into()).collect())
    }

    pub fn contains(&self, label: &str) -> bool {
        self.0.contains(label)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn union(&self, other: &Event) -> Event {
        Event(self.0.union(&other.0).cloned().collect())
    }

    pub fn is_disjoint(&self, other: &Event) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &Event) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl<S: Into<String>> FromIterator<S> for Event {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Event(iter.into_iter().map(Into::into).collect())
    }
}

/// An observable: an outcome set `X` and, for each outcome, an effect on the
/// state space. Stored row-major as `effects[outcome][point]`.
///
/// Construction enforces the observable axioms exactly: every entry is a
/// rational in `[0,1]` and each column (the effects at one state) sums to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    space: StateSpace,
    outcomes: Vec<String>,
    outcome_index: HashMap<String, usize>,
    effects: Vec<Vec<Scalar>>,
}

impl Observable {
    pub fn new<I, S>(space: StateSpace, outcomes: I, effects: Vec<Vec<Scalar>>) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let outcomes: Vec<String> = outcomes.into_iter().map(Into::into).collect();
        let mut outcome_index = HashMap::with_capacity(outcomes.len());
        for (i, label) in outcomes.iter().enumerate() {
            if outcome_index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        if effects.len() != outcomes.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} effect rows for {} outcomes",
                effects.len(),
                outcomes.len()
            )));
        }
        for (x, row) in outcomes.iter().zip(&effects) {
            if row.len() != space.len() {
                return Err(Error::DimensionMismatch(format!(
                    "effect row for outcome `{x}` has {} entries for a {}-point space",
                    row.len(),
                    space.len()
                )));
            }
            for (point, value) in space.labels().iter().zip(row) {
                if value.is_negative() {
                    return Err(Error::NegativeEffect {
                        outcome: x.clone(),
                        point: point.clone(),
                        value: value.clone(),
                    });
                }
            }
        }
        // Nonnegative entries with unit column sums also bound every entry by 1.
        for (m, point) in space.labels().iter().enumerate() {
            let sum: Scalar = effects.iter().map(|row| &row[m]).sum();
            if !sum.is_one() {
                return Err(Error::ColumnNotNormalized { point: point.clone(), sum });
            }
        }
        Ok(Observable { space, outcomes, outcome_index, effects })
    }

    /// The exact observable with one outcome per point, where outcome `i` is
    /// certain at point `i`.
    pub fn identity(space: StateSpace) -> Self {
        let n = space.len();
        let outcomes: Vec<String> = space.labels().to_vec();
        let effects = (0..n)
            .map(|i| {
                let mut row = vec![Scalar::zero(); n];
                row[i] = Scalar::one();
                row
            })
            .collect();
        Observable::new(space, outcomes, effects).expect("identity rows are stochastic")
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn outcome_index(&self, label: &str) -> Result<usize> {
        self.outcome_index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownOutcome(label.to_string()))
    }

    /// All effect rows, outcome-major.
    pub fn effect_rows(&self) -> &[Vec<Scalar>] {
        &self.effects
    }

    pub fn singleton_effect(&self, outcome: &str, point: &str) -> Result<&Scalar> {
        let x = self.outcome_index(outcome)?;
        let m = self.space.require(point)?;
        Ok(&self.effects[x][m])
    }

    /// `[F(Ξ)](ω)` for an event Ξ ⊆ X: the sum of the singleton effects.
    pub fn effect(&self, event: &Event, point: &str) -> Result<Scalar> {
        let m = self.space.require(point)?;
        let f = self.effect_function(event)?;
        Ok(f.into_iter().nth(m).expect("validated index"))
    }

    /// The effect of an event as a function on the whole space, in space
    /// order.
    pub fn effect_function(&self, event: &Event) -> Result<Vec<Scalar>> {
        let mut rows = Vec::with_capacity(event.len());
        for label in event.iter() {
            rows.push(self.outcome_index(label)?);
        }
        let n = self.space.len();
        let mut f = vec![Scalar::zero(); n];
        for x in rows {
            for (acc, v) in f.iter_mut().zip(&self.effects[x]) {
                *acc = &*acc + v;
            }
        }
        Ok(f)
    }

    /// The event containing every outcome.
    pub fn full_event(&self) -> Event {
        self.outcomes.iter().cloned().collect()
    }
}

/// What is known about the measured system's state when a session starts.
#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    /// The state is a known point ω; outcome probabilities are the effects
    /// at ω.
    KnownPoint(String),
    /// Nothing is known; no outcome distribution is computable.
    Unknown,
    /// The state is unknown but drawn from a known mixture; outcome
    /// probabilities are ⟨ν, F({x})⟩.
    UnknownWithPrior(MixedState),
}

/// The probabilities a session assigns to each outcome.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutcomeDistribution {
    outcomes: Vec<String>,
    probs: Vec<Scalar>,
}

impl OutcomeDistribution {
    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn probs(&self) -> &[Scalar] {
        &self.probs
    }

    pub fn prob(&self, outcome: &str) -> Option<&Scalar> {
        self.outcomes.iter().position(|x| x == outcome).map(|i| &self.probs[i])
    }
}

/// One measurement of one observable on one system. The distribution can be
/// taken at most once; afterwards the session is consumed.
#[derive(Clone, Debug)]
pub struct MeasurementSession {
    observable: Observable,
    state_spec: StateSpec,
    consumed: bool,
}

impl MeasurementSession {
    pub fn new(observable: Observable, state_spec: StateSpec) -> Result<Self> {
        match &state_spec {
            StateSpec::KnownPoint(label) => {
                if !observable.space().contains(label) {
                    return Err(Error::SpaceMismatch(format!(
                        "known point `{label}` is not in the observable's space"
                    )));
                }
            }
            StateSpec::UnknownWithPrior(state) => {
                if state.space() != observable.space() {
                    return Err(Error::SpaceMismatch(
                        "prior lives on a different space than the observable".into(),
                    ));
                }
            }
            StateSpec::Unknown => {}
        }
        Ok(MeasurementSession { observable, state_spec, consumed: false })
    }

    pub fn observable(&self) -> &Observable {
        &self.observable
    }

    pub fn state_spec(&self) -> &StateSpec {
        &self.state_spec
    }

    pub fn is_consumed(&self) -> bool {
        self.consumed
    }

    /// Yields the outcome distribution and consumes the session. A second
    /// call fails: one measurement, one result. A session whose state is
    /// entirely unknown never yields and is never consumed.
    pub fn outcome_distribution(&mut self) -> Result<OutcomeDistribution> {
        if self.consumed {
            return Err(Error::SessionConsumed);
        }
        let probs = match &self.state_spec {
            StateSpec::Unknown => return Err(Error::StateUnknown),
            StateSpec::KnownPoint(label) => {
                let m = self.observable.space().require(label).expect("checked at new");
                self.observable.effects.iter().map(|row| row[m].clone()).collect()
            }
            StateSpec::UnknownWithPrior(state) => self
                .observable
                .effects
                .iter()
                .map(|row| state.pair(row).expect("spaces checked at new"))
                .collect(),
        };
        self.consumed = true;
        Ok(OutcomeDistribution { outcomes: self.observable.outcomes.clone(), probs })
    }
}

// Wire form of an observable:
// `{"space": [...], "outcomes": [...], "effects": [[n,d], ...]}` with the
// effects flattened row-major by outcome. Deserializing revalidates the
// axioms, so no unnormalized observable can enter through JSON.
#[derive(Serialize, Deserialize)]
struct ObservableWire {
    space: Vec<String>,
    outcomes: Vec<String>,
    effects: Vec<Scalar>,
}

impl Serialize for Observable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = ObservableWire {
            space: self.space.labels().to_vec(),
            outcomes: self.outcomes.clone(),
            effects: self.effects.iter().flatten().cloned().collect(),
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Observable {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = ObservableWire::deserialize(deserializer)?;
        Observable::try_from(wire).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<ObservableWire> for Observable {
    type Error = Error;

    fn try_from(wire: ObservableWire) -> Result<Self> {
        let space = StateSpace::new(wire.space)?;
        let n = space.len();
        if wire.effects.len() != wire.outcomes.len() * n {
            return Err(Error::MalformedInput(format!(
                "expected {} effect entries ({} outcomes x {} points), got {}",
                wire.outcomes.len() * n,
                wire.outcomes.len(),
                n,
                wire.effects.len()
            )));
        }
        let effects = wire.effects.chunks(n).map(|c| c.to_vec()).collect();
        Observable::new(space, wire.outcomes, effects)
    }
}
