//! Symmetry families of observables and the equal-probability reduction.
//!
//! From a base observable O₁ and a bijection φ of the state space, the
//! orbit observables O_k are defined by precomposition with the iterates of
//! φ: [F_k(Ξ)](ω) = [F_1(Ξ)](φ_{k-1}(ω)). Selecting O_k with weight p_k and
//! measuring once yields the mixture probability Σ_k p_k [F_k(Ξ)](ω_m).
//!
//! When the weights are uniform and the family is generated by the cyclic
//! shift, the mixture is independent of the designated state ω_m and equals
//! a single statistical measurement of O₁ under the uniform state ν_e; this
//! is the exact content of the equal-probability reduction. An extension
//! hook accepts an arbitrary finite set of bijections, for which the
//! reduction is attempted by brute force and may legitimately fail.

use crate::algebra::{check_weights, Event, MixedState, Observable, StateSpace};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A bijection of a state space, stored as a permutation of point indices:
/// `mapping[i]` is the index of the image of point `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bijection {
    space: StateSpace,
    mapping: Vec<usize>,
}

impl Bijection {
    /// Build from image labels listed in space order.
    pub fn new<I, S>(space: StateSpace, images: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut mapping = Vec::with_capacity(space.len());
        for image in images {
            mapping.push(space.require(image.as_ref())?);
        }
        if mapping.len() != space.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} images for a {}-point space",
                mapping.len(),
                space.len()
            )));
        }
        let mut seen = vec![false; space.len()];
        for &i in &mapping {
            if seen[i] {
                return Err(Error::NotBijective(format!(
                    "label `{}` is hit twice",
                    space.label(i)
                )));
            }
            seen[i] = true;
        }
        Ok(Bijection { space, mapping })
    }

    pub fn identity(space: StateSpace) -> Self {
        let mapping = (0..space.len()).collect();
        Bijection { space, mapping }
    }

    /// The cyclic shift φ₁(ω_j) = ω_{j+1}, wrapping the last point to the
    /// first.
    pub fn cyclic_shift(space: StateSpace) -> Self {
        let n = space.len();
        let mapping = (0..n).map(|j| (j + 1) % n).collect();
        Bijection { space, mapping }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn apply_index(&self, i: usize) -> usize {
        self.mapping[i]
    }

    pub fn apply(&self, label: &str) -> Result<&str> {
        Ok(self.space.label(self.mapping[self.space.require(label)?]))
    }

    /// φ ∘ other: apply `other` first, then this bijection.
    pub fn compose(&self, other: &Bijection) -> Result<Bijection> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch("bijections live on different spaces".into()));
        }
        let mapping = other.mapping.iter().map(|&i| self.mapping[i]).collect();
        Ok(Bijection { space: self.space.clone(), mapping })
    }

    /// The k-th iterate φ_k, with φ_0 the identity.
    pub fn iterate(&self, k: usize) -> Bijection {
        let mut result = Bijection::identity(self.space.clone());
        for _ in 0..k {
            result = self.compose(&result).expect("same space");
        }
        result
    }
}

/// The k-th orbit observable (1-based): the base effects precomposed with
/// φ_{k-1}. Precomposition permutes columns, so normalization is preserved.
pub fn orbit_observable(base: &Observable, phi: &Bijection, k: usize) -> Result<Observable> {
    if phi.space() != base.space() {
        return Err(Error::SpaceMismatch(
            "bijection lives on a different space than the observable".into(),
        ));
    }
    let n = base.space().len();
    if k < 1 || k > n {
        return Err(Error::IndexOutOfRange { index: k, max: n });
    }
    let iterate = phi.iterate(k - 1);
    let effects = base
        .effect_rows()
        .iter()
        .map(|row| (0..n).map(|m| row[iterate.apply_index(m)].clone()).collect())
        .collect();
    Observable::new(base.space().clone(), base.outcomes().to_vec(), effects)
}

/// A weighted family of symmetry-related observables sharing one outcome
/// set: member k is the base precomposed with its bijection, selected with
/// weight p_k.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedObservableFamily {
    base: Observable,
    bijections: Vec<Bijection>,
    weights: Vec<Scalar>,
}

impl WeightedObservableFamily {
    /// The cyclic family: n = |Ω| members generated by the iterates of the
    /// cyclic shift, member k using φ_{k-1}.
    pub fn cyclic(base: Observable, weights: Vec<Scalar>) -> Result<Self> {
        let n = base.space().len();
        if weights.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for the {}-member cyclic family",
                weights.len(),
                n
            )));
        }
        let shift = Bijection::cyclic_shift(base.space().clone());
        let bijections = (0..n).map(|k| shift.iterate(k)).collect();
        Self::from_bijections(base, bijections, weights)
    }

    /// The cyclic family with uniform weights 1/n, the hypothesis of the
    /// equal-probability reduction.
    pub fn uniform_cyclic(base: Observable) -> Result<Self> {
        let n = base.space().len() as i64;
        let w = Scalar::ratio(1, n)?;
        let weights = vec![w; n as usize];
        Self::cyclic(base, weights)
    }

    /// Extension hook: a family over an arbitrary finite set of bijections.
    /// Only the cyclic construction carries the reduction's guarantee; for
    /// general families the reduction is checked and may fail.
    pub fn from_bijections(
        base: Observable,
        bijections: Vec<Bijection>,
        weights: Vec<Scalar>,
    ) -> Result<Self> {
        if bijections.is_empty() {
            return Err(Error::MalformedInput("family has no members".into()));
        }
        if weights.len() != bijections.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} bijections",
                weights.len(),
                bijections.len()
            )));
        }
        for b in &bijections {
            if b.space() != base.space() {
                return Err(Error::SpaceMismatch(
                    "family bijection lives on a different space than the base".into(),
                ));
            }
        }
        check_weights(&weights, "family weights")?;
        Ok(WeightedObservableFamily { base, bijections, weights })
    }

    pub fn base(&self) -> &Observable {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.bijections.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weights(&self) -> &[Scalar] {
        &self.weights
    }

    /// Member k as a standalone observable (1-based).
    pub fn member(&self, k: usize) -> Result<Observable> {
        if k < 1 || k > self.len() {
            return Err(Error::IndexOutOfRange { index: k, max: self.len() });
        }
        let bij = &self.bijections[k - 1];
        let n = self.base.space().len();
        let effects = self
            .base
            .effect_rows()
            .iter()
            .map(|row| (0..n).map(|m| row[bij.apply_index(m)].clone()).collect())
            .collect();
        Observable::new(self.base.space().clone(), self.base.outcomes().to_vec(), effects)
    }

    /// The probability the mixture measurement assigns to the event when
    /// the designated state is `point`: Σ_k p_k [F_k(event)](ω_m).
    pub fn mixture_probability(&self, point: &str, event: &Event) -> Result<Scalar> {
        let m = self.base.space().require(point)?;
        let f = self.base.effect_function(event)?;
        Ok(self
            .weights
            .iter()
            .zip(&self.bijections)
            .map(|(w, bij)| w * &f[bij.apply_index(m)])
            .sum())
    }

    /// The state mixture Σ_k p_k δ_{φ_{k-1}(ω_m)} induced by designating
    /// `point`. Pairing it with any base effect reproduces
    /// [`Self::mixture_probability`].
    pub fn mixture_state(&self, point: &str) -> Result<MixedState> {
        let m = self.base.space().require(point)?;
        let mut weights = vec![Scalar::zero(); self.base.space().len()];
        for (w, bij) in self.weights.iter().zip(&self.bijections) {
            let image = bij.apply_index(m);
            weights[image] = &weights[image] + w;
        }
        MixedState::new(self.base.space().clone(), weights)
    }

    /// The equal-probability reduction: with uniform weights the mixture
    /// measurement collapses to one statistical measurement of the base
    /// observable under ν_e = (1/n) Σ_k δ_{φ_{k-1}(ω_m)}, verified
    /// independent of the designated state m.
    pub fn equal_probability_reduction(&self) -> Result<MixedState> {
        let first = &self.weights[0];
        if self.weights.iter().any(|w| w != first) {
            return Err(Error::NotUniformWeights);
        }
        let space = self.base.space();
        let mut common: Option<MixedState> = None;
        for point in space.labels() {
            let nu = self.mixture_state(point)?;
            match &common {
                None => common = Some(nu),
                Some(c) if *c == nu => {}
                Some(_) => return Err(Error::StateDependentReduction),
            }
        }
        Ok(common.expect("space is nonempty"))
    }

    /// True iff the mixture probability of every event is the same at every
    /// designated state. By additivity it suffices to compare the singleton
    /// events, exhaustively.
    pub fn is_state_independent(&self) -> bool {
        let space = self.base.space();
        for row in self.base.effect_rows() {
            let value_at = |m: usize| -> Scalar {
                self.weights
                    .iter()
                    .zip(&self.bijections)
                    .map(|(w, bij)| w * &row[bij.apply_index(m)])
                    .sum()
            };
            let first = value_at(0);
            if (1..space.len()).any(|m| value_at(m) != first) {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::statistical_probability;
    use crate::testutil::{doors, host_observable, r};

    /// Oracle for the mixture: materialize every member observable and
    /// enumerate (member, outcome) pairs, instead of indexing through the
    /// bijections.
    fn oracle_mixture(family: &WeightedObservableFamily, point: &str, event: &Event) -> Scalar {
        (1..=family.len())
            .map(|k| {
                let member = family.member(k).unwrap();
                &family.weights()[k - 1] * &member.effect(event, point).unwrap()
            })
            .sum()
    }

    #[test]
    fn cyclic_shift_rotates_points() {
        let phi = Bijection::cyclic_shift(doors());
        assert_eq!(phi.apply("w1").unwrap(), "w2");
        assert_eq!(phi.apply("w2").unwrap(), "w3");
        assert_eq!(phi.apply("w3").unwrap(), "w1");
        let one = StateSpace::new(["only"]).unwrap();
        assert_eq!(Bijection::cyclic_shift(one.clone()), Bijection::identity(one));
    }

    #[test]
    fn iterating_the_shift_full_circle_is_the_identity() {
        let phi = Bijection::cyclic_shift(doors());
        assert_eq!(phi.iterate(3), Bijection::identity(doors()));
        assert_eq!(phi.iterate(0), Bijection::identity(doors()));
    }

    #[test]
    fn bijection_rejects_non_permutations() {
        assert!(matches!(
            Bijection::new(doors(), ["w1", "w1", "w2"]),
            Err(Error::NotBijective(_))
        ));
        assert!(matches!(
            Bijection::new(doors(), ["w1", "w2", "w9"]),
            Err(Error::UnknownLabel(_))
        ));
        assert!(matches!(
            Bijection::new(doors(), ["w1", "w2"]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn first_orbit_member_is_the_base() {
        let base = host_observable();
        let phi = Bijection::cyclic_shift(doors());
        assert_eq!(orbit_observable(&base, &phi, 1).unwrap(), base);
    }

    #[test]
    fn second_orbit_member_reads_the_shifted_point() {
        let base = host_observable();
        let phi = Bijection::cyclic_shift(doors());
        let second = orbit_observable(&base, &phi, 2).unwrap();
        // [F_2({3})](w1) = [F_1({3})](w2) = 1.
        assert_eq!(*second.singleton_effect("3", "w1").unwrap(), Scalar::one());
        assert_eq!(*second.singleton_effect("2", "w1").unwrap(), Scalar::zero());
    }

    #[test]
    fn orbit_index_is_one_based_and_bounded() {
        let base = host_observable();
        let phi = Bijection::cyclic_shift(doors());
        assert!(matches!(
            orbit_observable(&base, &phi, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            orbit_observable(&base, &phi, 4),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn uniform_mixture_is_one_half_everywhere() {
        let family = WeightedObservableFamily::uniform_cyclic(host_observable()).unwrap();
        let event = Event::singleton("3");
        for point in ["w1", "w2", "w3"] {
            assert_eq!(family.mixture_probability(point, &event).unwrap(), r(1, 2));
            assert_eq!(oracle_mixture(&family, point, &event), r(1, 2));
        }
        assert_eq!(
            family.mixture_probability("w1", &family.base().full_event()).unwrap(),
            Scalar::one()
        );
    }

    #[test]
    fn skewed_weights_expose_state_dependence() {
        let family = WeightedObservableFamily::cyclic(
            host_observable(),
            vec![r(1, 2), r(1, 2), Scalar::zero()],
        )
        .unwrap();
        let event = Event::singleton("3");
        assert_eq!(family.mixture_probability("w1", &event).unwrap(), r(3, 4));
        assert_eq!(family.mixture_probability("w2", &event).unwrap(), r(1, 2));
        assert_eq!(oracle_mixture(&family, "w1", &event), r(3, 4));
        assert!(!family.is_state_independent());
        assert!(matches!(
            family.equal_probability_reduction(),
            Err(Error::NotUniformWeights)
        ));
    }

    #[test]
    fn uniform_cyclic_family_is_state_independent() {
        let family = WeightedObservableFamily::uniform_cyclic(host_observable()).unwrap();
        assert!(family.is_state_independent());
    }

    #[test]
    fn reduction_yields_the_uniform_state() {
        let family = WeightedObservableFamily::uniform_cyclic(host_observable()).unwrap();
        let nu = family.equal_probability_reduction().unwrap();
        assert_eq!(nu, MixedState::uniform(doors()));
        // The mixture equals one statistical measurement under ν_e.
        let event = Event::singleton("3");
        assert_eq!(
            family.mixture_probability("w2", &event).unwrap(),
            statistical_probability(family.base(), &nu, &event).unwrap()
        );
    }

    #[test]
    fn reduction_on_a_single_point_is_a_point_mass() {
        let one = StateSpace::new(["only"]).unwrap();
        let family =
            WeightedObservableFamily::uniform_cyclic(Observable::identity(one.clone())).unwrap();
        assert_eq!(
            family.equal_probability_reduction().unwrap(),
            MixedState::point(one, "only").unwrap()
        );
        assert!(family.is_state_independent());
    }

    #[test]
    fn mixture_state_pairing_reproduces_the_mixture() {
        let family = WeightedObservableFamily::cyclic(
            host_observable(),
            vec![r(1, 2), r(1, 2), Scalar::zero()],
        )
        .unwrap();
        let event = Event::singleton("3");
        let f = family.base().effect_function(&event).unwrap();
        for point in ["w1", "w2", "w3"] {
            let nu = family.mixture_state(point).unwrap();
            assert_eq!(nu.pair(&f).unwrap(), family.mixture_probability(point, &event).unwrap());
        }
    }

    #[test]
    fn hook_family_may_lack_a_reduction() {
        let base = host_observable();
        let id = Bijection::identity(doors());
        let family = WeightedObservableFamily::from_bijections(
            base,
            vec![id.clone(), id],
            vec![r(1, 2), r(1, 2)],
        )
        .unwrap();
        // Weights are uniform, but every designated state keeps its own
        // point mass, so no state-independent reduction exists.
        assert!(matches!(
            family.equal_probability_reduction(),
            Err(Error::StateDependentReduction)
        ));
        assert!(!family.is_state_independent());
    }

    #[test]
    fn hook_family_with_a_transitive_pair_reduces() {
        let two = StateSpace::new(["a", "b"]).unwrap();
        let base = Observable::identity(two.clone());
        let swap = Bijection::new(two.clone(), ["b", "a"]).unwrap();
        let family = WeightedObservableFamily::from_bijections(
            base,
            vec![Bijection::identity(two.clone()), swap],
            vec![r(1, 2), r(1, 2)],
        )
        .unwrap();
        assert_eq!(
            family.equal_probability_reduction().unwrap(),
            MixedState::uniform(two)
        );
        assert!(family.is_state_independent());
    }

    #[test]
    fn family_validation() {
        let base = host_observable();
        assert!(matches!(
            WeightedObservableFamily::cyclic(base.clone(), vec![r(1, 2), r(1, 2)]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            WeightedObservableFamily::cyclic(base.clone(), vec![r(1, 2), r(1, 2), r(1, 2)]),
            Err(Error::WeightSumNotOne { .. })
        ));
        assert!(matches!(
            WeightedObservableFamily::cyclic(base.clone(), vec![r(3, 2), r(-1, 4), r(-1, 4)]),
            Err(Error::NegativeWeight { .. })
        ));
        assert!(matches!(
            WeightedObservableFamily::from_bijections(base, vec![], vec![]),
            Err(Error::MalformedInput(_))
        ));
    }

    #[test]
    fn mixture_validates_labels() {
        let family = WeightedObservableFamily::uniform_cyclic(host_observable()).unwrap();
        assert!(matches!(
            family.mixture_probability("w9", &Event::singleton("3")),
            Err(Error::UnknownLabel(_))
        ));
        assert!(matches!(
            family.mixture_probability("w1", &Event::singleton("9")),
            Err(Error::UnknownOutcome(_))
        ));
    }
}
