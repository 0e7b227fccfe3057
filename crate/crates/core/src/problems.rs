//! The Monty Hall and three-prisoners problems.
//!
//! Both puzzles share one measurement-theoretic skeleton over a three-point
//! space: an observer is attached to one point (the picked door, the asking
//! prisoner), a third party reveals one other point, and the revealing
//! party's behavior is the host observable: it never utters the observer's
//! point, is forced when the hidden state sits elsewhere, and splits α vs
//! 1−α between the two utterable points (in label order) when the hidden
//! state is the observer's point. α = 1/2 is the classical fair-host case.
//!
//! The three variants differ only in what is known beforehand:
//!
//! * `fisher`: nothing; infer by maximum likelihood. Monty Hall gets a
//!   switch recommendation; the prisoners' happiness question has no answer
//!   without a prior and is reported as not well posed (the inferred state
//!   is still included).
//! * `bayes`: a prior; update it and compare. Monty Hall compares the
//!   posterior of the picked door against the other unopened door;
//!   prisoners compare the asker's prior weight against their posterior
//!   weight.
//! * `equal_probability`: no prior assumed; the uniform one is derived from
//!   the equal-probability reduction of the uniformly weighted cyclic
//!   family, then the Bayes comparison runs with it.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{check_weights, Event, MixedState, Observable, StateSpace};
use crate::error::{Error, Result};
use crate::inference::{bayes_posterior, fisher_mle};
use crate::scalar::Scalar;
use crate::symmetry::WeightedObservableFamily;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Fisher,
    Bayes,
    EqualProbability,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Fisher => "fisher",
            Variant::Bayes => "bayes",
            Variant::EqualProbability => "equal_probability",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictKind {
    Switch,
    Stay,
    Indifferent,
    HappinessIncreases,
    HappinessInvariant,
    HappinessDecreases,
    NotWellPosed,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::Switch => "SWITCH",
            VerdictKind::Stay => "STAY",
            VerdictKind::Indifferent => "INDIFFERENT",
            VerdictKind::HappinessIncreases => "HAPPINESS_INCREASES",
            VerdictKind::HappinessInvariant => "HAPPINESS_INVARIANT",
            VerdictKind::HappinessDecreases => "HAPPINESS_DECREASES",
            VerdictKind::NotWellPosed => "NOT_WELL_POSED",
        }
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The answer to a problem instance. Bayes-style variants carry the
/// posterior; Fisher-style verdicts carry the inferred state set.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub posterior: Option<MixedState>,
    pub inferred_state: Option<Vec<String>>,
}

/// Wire form of a verdict: the posterior is the bare weight vector in label
/// order. Round-trips exactly through JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub kind: VerdictKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub posterior: Option<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inferred_state: Option<Vec<String>>,
}

impl Verdict {
    pub fn record(&self) -> VerdictRecord {
        VerdictRecord {
            kind: self.kind,
            posterior: self.posterior.as_ref().map(|p| p.weights().to_vec()),
            inferred_state: self.inferred_state.clone(),
        }
    }
}

fn default_labels() -> [String; 3] {
    ["A1".to_string(), "A2".to_string(), "A3".to_string()]
}

fn default_first() -> String {
    "A1".to_string()
}

fn default_third() -> String {
    "A3".to_string()
}

fn default_alpha() -> Scalar {
    Scalar::ratio(1, 2).expect("1/2 is a valid ratio")
}

/// You picked a door; the host, knowing the car, opened another. Should you
/// switch?
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MontyHallSpec {
    #[serde(default = "default_labels")]
    pub doors: [String; 3],
    #[serde(default = "default_first")]
    pub picked: String,
    #[serde(default = "default_third")]
    pub opened: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior: Option<[Scalar; 3]>,
    #[serde(default = "default_alpha")]
    pub alpha: Scalar,
    pub variant: Variant,
}

impl MontyHallSpec {
    /// The classical configuration: doors A1/A2/A3, picked A1, opened A3,
    /// fair host, no prior.
    pub fn new(variant: Variant) -> Self {
        MontyHallSpec {
            doors: default_labels(),
            picked: default_first(),
            opened: default_third(),
            prior: None,
            alpha: default_alpha(),
            variant,
        }
    }

    fn scenario(&self) -> Scenario<'_> {
        Scenario {
            labels: &self.doors,
            observer: &self.picked,
            revealed: &self.opened,
            prior: self.prior.as_ref(),
            alpha: &self.alpha,
            variant: self.variant,
        }
    }

    /// The host observable for this spec at its α.
    pub fn observable(&self) -> Result<Observable> {
        let scn = self.scenario();
        let v = scn.validate()?;
        scn.observable(&v, &self.alpha)
    }

    pub fn fisher_verdict(&self) -> Result<Verdict> {
        let maximizers = self.scenario().fisher_maximizers()?;
        Ok(Verdict { kind: VerdictKind::Switch, posterior: None, inferred_state: Some(maximizers) })
    }

    pub fn bayes_verdict(&self) -> Result<Verdict> {
        let scn = self.scenario();
        scn.require_variant(Variant::Bayes)?;
        let v = scn.validate()?;
        let prior = scn.prior.ok_or(Error::PriorRequired)?;
        let posterior = scn.posterior(&v, prior)?;
        Ok(monty_decision(&v, posterior))
    }

    pub fn equal_probability_verdict(&self) -> Result<Verdict> {
        let scn = self.scenario();
        let (v, posterior) = scn.equal_probability_posterior()?;
        Ok(monty_decision(&v, posterior))
    }

    pub fn solve(&self) -> Result<Verdict> {
        match self.variant {
            Variant::Fisher => self.fisher_verdict(),
            Variant::Bayes => self.bayes_verdict(),
            Variant::EqualProbability => self.equal_probability_verdict(),
        }
    }
}

/// Prisoner `asker` learned which of the others is to be executed. Did the
/// asker's survival prospects change?
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrisonersSpec {
    #[serde(default = "default_labels")]
    pub prisoners: [String; 3],
    #[serde(default = "default_first", alias = "picked")]
    pub asker: String,
    #[serde(default = "default_third", alias = "named", alias = "opened")]
    pub named_executed: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior: Option<[Scalar; 3]>,
    #[serde(default = "default_alpha")]
    pub alpha: Scalar,
    pub variant: Variant,
}

impl PrisonersSpec {
    /// The classical configuration: prisoners A1/A2/A3, asker A1, named A3,
    /// fair emperor, no prior.
    pub fn new(variant: Variant) -> Self {
        PrisonersSpec {
            prisoners: default_labels(),
            asker: default_first(),
            named_executed: default_third(),
            prior: None,
            alpha: default_alpha(),
            variant,
        }
    }

    fn scenario(&self) -> Scenario<'_> {
        Scenario {
            labels: &self.prisoners,
            observer: &self.asker,
            revealed: &self.named_executed,
            prior: self.prior.as_ref(),
            alpha: &self.alpha,
            variant: self.variant,
        }
    }

    /// The emperor observable for this spec at its α.
    pub fn observable(&self) -> Result<Observable> {
        let scn = self.scenario();
        let v = scn.validate()?;
        scn.observable(&v, &self.alpha)
    }

    /// Maximum likelihood identifies the spared prisoner, but the happiness
    /// question itself has no prior-free answer.
    pub fn fisher_verdict(&self) -> Result<Verdict> {
        let maximizers = self.scenario().fisher_maximizers()?;
        Ok(Verdict {
            kind: VerdictKind::NotWellPosed,
            posterior: None,
            inferred_state: Some(maximizers),
        })
    }

    pub fn bayes_verdict(&self) -> Result<Verdict> {
        let scn = self.scenario();
        scn.require_variant(Variant::Bayes)?;
        let v = scn.validate()?;
        let prior = scn.prior.ok_or(Error::PriorRequired)?;
        let posterior = scn.posterior(&v, prior)?;
        Ok(prisoner_decision(&v, &prior[v.observer], posterior))
    }

    pub fn equal_probability_verdict(&self) -> Result<Verdict> {
        let scn = self.scenario();
        let (v, posterior) = scn.equal_probability_posterior()?;
        let prior_weight = Scalar::ratio(1, 3).expect("valid ratio");
        Ok(prisoner_decision(&v, &prior_weight, posterior))
    }

    pub fn solve(&self) -> Result<Verdict> {
        match self.variant {
            Variant::Fisher => self.fisher_verdict(),
            Variant::Bayes => self.bayes_verdict(),
            Variant::EqualProbability => self.equal_probability_verdict(),
        }
    }
}

/// A problem instance in wire form, tagged by `"problem"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "problem", rename_all = "snake_case")]
pub enum ProblemSpec {
    MontyHall(MontyHallSpec),
    ThreePrisoners(PrisonersSpec),
}

impl ProblemSpec {
    pub fn solve(&self) -> Result<Verdict> {
        match self {
            ProblemSpec::MontyHall(spec) => spec.solve(),
            ProblemSpec::ThreePrisoners(spec) => spec.solve(),
        }
    }

    pub fn observable(&self) -> Result<Observable> {
        match self {
            ProblemSpec::MontyHall(spec) => spec.observable(),
            ProblemSpec::ThreePrisoners(spec) => spec.observable(),
        }
    }
}

/// The shared three-point skeleton; `observer` is the picked door or the
/// asking prisoner, `revealed` the opened door or the named prisoner.
struct Scenario<'a> {
    labels: &'a [String; 3],
    observer: &'a str,
    revealed: &'a str,
    prior: Option<&'a [Scalar; 3]>,
    alpha: &'a Scalar,
    variant: Variant,
}

struct Validated {
    space: StateSpace,
    observer: usize,
    /// The third point: neither observed nor revealed.
    other: usize,
}

impl Scenario<'_> {
    fn require_variant(&self, requested: Variant) -> Result<()> {
        if self.variant != requested {
            return Err(Error::VariantMismatch {
                expected: self.variant.as_str().to_string(),
                requested: requested.as_str().to_string(),
            });
        }
        Ok(())
    }

    fn validate(&self) -> Result<Validated> {
        let space = StateSpace::new(self.labels.iter().cloned())?;
        let observer = space.require(self.observer)?;
        let revealed = space.require(self.revealed)?;
        if observer == revealed {
            return Err(Error::InvalidProblemSpec(format!(
                "`{}` cannot be both the observer's point and the revealed one",
                self.observer
            )));
        }
        let other = (0..3).find(|i| *i != observer && *i != revealed).expect("three points");
        if self.alpha <= &Scalar::zero() || self.alpha >= &Scalar::one() {
            return Err(Error::InvalidAlpha(self.alpha.clone()));
        }
        if let Some(prior) = self.prior {
            check_weights(prior, "prior")?;
        }
        Ok(Validated { space, observer, other })
    }

    /// The host/emperor observable at the given α. Utterances reuse the
    /// point labels. The observer's point is never uttered; at any other
    /// hidden state the one admissible utterance is certain; at the
    /// observer's point the two admissible utterances get α and 1−α in
    /// label order.
    fn observable(&self, v: &Validated, alpha: &Scalar) -> Result<Observable> {
        let mut effects = vec![vec![Scalar::zero(); 3]; 3];
        let openable: Vec<usize> = (0..3).filter(|i| *i != v.observer).collect();
        effects[openable[0]][v.observer] = alpha.clone();
        effects[openable[1]][v.observer] = Scalar::one() - alpha;
        for &m in &openable {
            let told = (0..3).find(|i| *i != v.observer && *i != m).expect("three points");
            effects[told][m] = Scalar::one();
        }
        Observable::new(v.space.clone(), self.labels.iter().cloned(), effects)
    }

    /// Maximum-likelihood point set for the revealed utterance, with the
    /// verdict's α-independence asserted by probing other α values.
    fn fisher_maximizers(&self) -> Result<Vec<String>> {
        self.require_variant(Variant::Fisher)?;
        if self.prior.is_some() {
            return Err(Error::PriorSuppliedForFisher);
        }
        let v = self.validate()?;
        let event = Event::singleton(self.revealed);
        let result = fisher_mle(&self.observable(&v, self.alpha)?, &event)?;
        for (n, d) in [(1i64, 4i64), (3, 4)] {
            let probe_alpha = Scalar::ratio(n, d).expect("valid ratio");
            let probe = fisher_mle(&self.observable(&v, &probe_alpha)?, &event)?;
            assert_eq!(
                probe.maximizers, result.maximizers,
                "maximum-likelihood point set must not depend on alpha"
            );
        }
        Ok(result.maximizers)
    }

    fn posterior(&self, v: &Validated, prior: &[Scalar; 3]) -> Result<MixedState> {
        let state = MixedState::new(v.space.clone(), prior.to_vec())?;
        let event = Event::singleton(self.revealed);
        let result = bayes_posterior(&self.observable(v, self.alpha)?, &state, &event)?;
        Ok(result.posterior)
    }

    /// Derive the uniform prior from the equal-probability reduction of the
    /// uniformly weighted cyclic family, then update it.
    fn equal_probability_posterior(&self) -> Result<(Validated, MixedState)> {
        self.require_variant(Variant::EqualProbability)?;
        if self.prior.is_some() {
            return Err(Error::PriorSuppliedForEqualProbability);
        }
        let v = self.validate()?;
        let obs = self.observable(&v, self.alpha)?;
        let family = WeightedObservableFamily::uniform_cyclic(obs.clone())?;
        let nu_e = family.equal_probability_reduction()?;
        let event = Event::singleton(self.revealed);
        let result = bayes_posterior(&obs, &nu_e, &event)?;
        Ok((v, result.posterior))
    }
}

fn monty_decision(v: &Validated, posterior: MixedState) -> Verdict {
    let picked = &posterior.weights()[v.observer];
    let other = &posterior.weights()[v.other];
    let kind = match picked.cmp(other) {
        Ordering::Less => VerdictKind::Switch,
        Ordering::Equal => VerdictKind::Indifferent,
        Ordering::Greater => VerdictKind::Stay,
    };
    Verdict { kind, posterior: Some(posterior), inferred_state: None }
}

fn prisoner_decision(v: &Validated, prior_weight: &Scalar, posterior: MixedState) -> Verdict {
    let post_weight = &posterior.weights()[v.observer];
    let kind = match prior_weight.cmp(post_weight) {
        Ordering::Less => VerdictKind::HappinessIncreases,
        Ordering::Equal => VerdictKind::HappinessInvariant,
        Ordering::Greater => VerdictKind::HappinessDecreases,
    };
    Verdict { kind, posterior: Some(posterior), inferred_state: None }
}
