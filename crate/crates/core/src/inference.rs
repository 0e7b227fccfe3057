//! Inference from a single observed outcome event.
//!
//! Measurement probabilities come in two forms depending on what is known:
//! a known point state gives `[F(Ξ)](ω)` directly, and a prior over states
//! gives the average ⟨ν, F(Ξ)⟩. From one observed event the two classical
//! inference rules recover information about the state:
//!
//! * Fisher's maximum likelihood: report every state that maximizes
//!   `[F(Ξ)](ω)`. Ties are reported, never broken.
//! * Bayesian updating: reweight the prior by the likelihood and normalize
//!   by the evidence ⟨ν, F(Ξ)⟩.
//!
//! Both rules consume the result of one measurement; nothing here samples
//! or iterates.

use serde::Serialize;

use crate::algebra::{Event, MixedState, Observable};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Maximum-likelihood inference result: all maximizers, in space order, and
/// the maximum likelihood itself.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FisherResult {
    pub maximizers: Vec<String>,
    pub max_likelihood: Scalar,
}

/// Bayesian inference result: the posterior state and the evidence
/// ⟨ν, F(Ξ)⟩ it was normalized by.
#[derive(Clone, Debug, PartialEq)]
pub struct BayesResult {
    pub posterior: MixedState,
    pub evidence: Scalar,
}

/// Probability of the event when the state is the known point ω.
pub fn pure_probability(obs: &Observable, point: &str, event: &Event) -> Result<Scalar> {
    obs.effect(event, point)
}

/// Probability of the event when the state is drawn from `prior`:
/// ⟨ν, F(Ξ)⟩.
pub fn statistical_probability(
    obs: &Observable,
    prior: &MixedState,
    event: &Event,
) -> Result<Scalar> {
    if prior.space() != obs.space() {
        return Err(Error::SpaceMismatch(
            "prior lives on a different space than the observable".into(),
        ));
    }
    prior.pair(&obs.effect_function(event)?)
}

/// All states of maximal likelihood for the observed event.
///
/// Fails with [`Error::ZeroLikelihoodEverywhere`] when the event is
/// impossible at every state, since then nothing can be inferred.
pub fn fisher_mle(obs: &Observable, event: &Event) -> Result<FisherResult> {
    let likelihood = obs.effect_function(event)?;
    let max = likelihood.iter().max().cloned().expect("space is nonempty");
    if max.is_zero() {
        return Err(Error::ZeroLikelihoodEverywhere);
    }
    let maximizers = obs
        .space()
        .labels()
        .iter()
        .zip(&likelihood)
        .filter(|(_, l)| **l == max)
        .map(|(label, _)| label.clone())
        .collect();
    Ok(FisherResult { maximizers, max_likelihood: max })
}

/// The posterior state after observing the event, starting from `prior`:
/// ν_post(ω) = [F(Ξ)](ω) ν(ω) / ⟨ν, F(Ξ)⟩.
///
/// Fails with [`Error::ZeroEvidence`] when the event has prior probability
/// zero, since conditioning on it is undefined.
pub fn bayes_posterior(obs: &Observable, prior: &MixedState, event: &Event) -> Result<BayesResult> {
    if prior.space() != obs.space() {
        return Err(Error::SpaceMismatch(
            "prior lives on a different space than the observable".into(),
        ));
    }
    let likelihood = obs.effect_function(event)?;
    let evidence: Scalar = prior.weights().iter().zip(&likelihood).map(|(w, l)| w * l).sum();
    if evidence.is_zero() {
        return Err(Error::ZeroEvidence);
    }
    let weights = prior
        .weights()
        .iter()
        .zip(&likelihood)
        .map(|(w, l)| w * l / &evidence)
        .collect();
    let posterior = MixedState::new(prior.space().clone(), weights)
        .expect("reweighted prior is a probability vector");
    Ok(BayesResult { posterior, evidence })
}

/// Two systems whose preparations differ only in an unobservable annotation
/// are operationally identical: the outcome distribution of a statistical
/// measurement depends on the observable and the mixture alone. This helper
/// computes the distribution twice, once per hidden point, and reports
/// whether they agree (they always do; the point is that the claim is
/// checkable).
pub fn statistical_indistinguishability_check(
    obs: &Observable,
    prior: &MixedState,
    hidden_a: &str,
    hidden_b: &str,
) -> Result<bool> {
    obs.space().require(hidden_a)?;
    obs.space().require(hidden_b)?;
    let dist_for = |_hidden: &str| -> Result<Vec<Scalar>> {
        obs.outcomes()
            .iter()
            .map(|x| statistical_probability(obs, prior, &Event::singleton(x.clone())))
            .collect()
    };
    Ok(dist_for(hidden_a)? == dist_for(hidden_b)?)
}
