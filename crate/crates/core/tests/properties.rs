//! Property tests over randomly generated spaces, observables, states, and
//! causal chains. Every law checked here is exact: the arithmetic is big
//! rational, so assertions use equality, not tolerances.

use finmeas::gen;
use finmeas::{
    bayes_posterior, fisher_mle, pure_probability, statistical_probability, Error, Event,
    MeasurementSession, MixedState, MontyHallSpec, Observable, PrisonersSpec, Scalar, StateSpec,
    Variant, VerdictKind, WeightedObservableFamily,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn r(num: i64, den: i64) -> Scalar {
    Scalar::ratio(num, den).expect("test ratio")
}

/// A random rational strictly between 0 and 1.
fn open_unit<R: Rng>(rng: &mut R) -> Scalar {
    let den = rng.gen_range(2..=9);
    let num = rng.gen_range(1..den);
    r(num, den)
}

/// Joint-table Bayes oracle: enumerate prior mass times likelihood per
/// point, normalize by the total. Returns None when the total is zero.
fn oracle_posterior(
    obs: &Observable,
    prior: &MixedState,
    event: &Event,
) -> Option<(Vec<Scalar>, Scalar)> {
    let joint: Vec<Scalar> = obs
        .space()
        .labels()
        .iter()
        .zip(prior.weights())
        .map(|(point, mass)| obs.effect(event, point).expect("event is valid") * mass)
        .collect();
    let evidence: Scalar = joint.iter().sum();
    if evidence.is_zero() {
        return None;
    }
    let weights = joint.into_iter().map(|j| j / &evidence).collect();
    Some((weights, evidence))
}

proptest! {
    #[test]
    fn observable_axioms_hold(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let space = gen::space(&mut rng, "w", 5);
        let obs = gen::observable(&mut rng, &space, 5);

        for point in space.labels() {
            let total: Scalar = obs
                .outcomes()
                .iter()
                .map(|x| obs.singleton_effect(x, point).expect("valid pair").clone())
                .sum();
            prop_assert!(total.is_one());
            prop_assert!(obs.effect(&Event::empty(), point).unwrap().is_zero());
            prop_assert!(obs.effect(&obs.full_event(), point).unwrap().is_one());
        }

        // Additivity on a random disjoint pair, and monotonicity under
        // inclusion.
        let first = gen::event(&mut rng, &obs);
        let second: Event = obs
            .outcomes()
            .iter()
            .filter(|x| !first.contains(x))
            .filter(|_| rng.gen_bool(0.5))
            .cloned()
            .collect();
        prop_assert!(first.is_disjoint(&second));
        let union = first.union(&second);
        for point in space.labels() {
            let a = obs.effect(&first, point).unwrap();
            let b = obs.effect(&second, point).unwrap();
            let u = obs.effect(&union, point).unwrap();
            prop_assert_eq!(&a + &b, u.clone());
            prop_assert!(a <= u);
            prop_assert!(b <= u);
            prop_assert!(u <= Scalar::one());
        }
    }

    #[test]
    fn sessions_yield_exactly_once(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let space = gen::space(&mut rng, "w", 5);
        let obs = gen::observable(&mut rng, &space, 5);

        // A known point: the distribution is the effect column at that point.
        let point = space.label(rng.gen_range(0..space.len())).to_string();
        let mut session =
            MeasurementSession::new(obs.clone(), StateSpec::KnownPoint(point.clone())).unwrap();
        let dist = session.outcome_distribution().unwrap();
        let total: Scalar = dist.probs().iter().sum();
        prop_assert!(total.is_one());
        for x in obs.outcomes() {
            let expected = pure_probability(&obs, &point, &Event::singleton(x.clone())).unwrap();
            prop_assert_eq!(dist.prob(x).unwrap(), &expected);
        }
        for _ in 0..2 {
            prop_assert!(matches!(
                session.outcome_distribution(),
                Err(Error::SessionConsumed)
            ));
        }

        // A prior: the distribution averages the columns.
        let prior = gen::state(&mut rng, &space);
        let mut session =
            MeasurementSession::new(obs.clone(), StateSpec::UnknownWithPrior(prior.clone()))
                .unwrap();
        let dist = session.outcome_distribution().unwrap();
        for x in obs.outcomes() {
            let expected =
                statistical_probability(&obs, &prior, &Event::singleton(x.clone())).unwrap();
            prop_assert_eq!(dist.prob(x).unwrap(), &expected);
        }
        prop_assert!(matches!(session.outcome_distribution(), Err(Error::SessionConsumed)));

        // No state knowledge: the session never yields and is never consumed.
        let mut session = MeasurementSession::new(obs, StateSpec::Unknown).unwrap();
        for _ in 0..3 {
            prop_assert!(matches!(session.outcome_distribution(), Err(Error::StateUnknown)));
            prop_assert!(!session.is_consumed());
        }
    }

    #[test]
    fn bayes_matches_the_joint_table_oracle(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let space = gen::space(&mut rng, "w", 5);
        let obs = gen::observable(&mut rng, &space, 5);
        let prior = gen::state(&mut rng, &space);
        let event = gen::event(&mut rng, &obs);

        match (bayes_posterior(&obs, &prior, &event), oracle_posterior(&obs, &prior, &event)) {
            (Ok(res), Some((weights, evidence))) => {
                prop_assert_eq!(res.posterior.weights(), &weights[..]);
                prop_assert_eq!(&res.evidence, &evidence);
                let total: Scalar = res.posterior.weights().iter().sum();
                prop_assert!(total.is_one());
                // Support: posterior mass vanishes exactly where prior mass
                // or likelihood does.
                for (i, point) in space.labels().iter().enumerate() {
                    let likelihood = obs.effect(&event, point).unwrap();
                    let expect_zero = likelihood.is_zero() || prior.weights()[i].is_zero();
                    prop_assert_eq!(res.posterior.weights()[i].is_zero(), expect_zero);
                }
            }
            (Err(Error::ZeroEvidence), None) => {}
            (got, oracle) => {
                return Err(TestCaseError::fail(format!(
                    "bayes and oracle disagree: {got:?} vs oracle {oracle:?}"
                )));
            }
        }
    }

    #[test]
    fn conditioning_on_the_full_event_returns_the_prior(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let space = gen::space(&mut rng, "w", 5);
        let obs = gen::observable(&mut rng, &space, 5);
        let prior = gen::state(&mut rng, &space);

        let res = bayes_posterior(&obs, &prior, &obs.full_event()).unwrap();
        prop_assert!(res.evidence.is_one());
        prop_assert_eq!(res.posterior, prior);
    }

    #[test]
    fn fisher_agrees_with_bayes_under_a_uniform_prior(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let space = gen::space(&mut rng, "w", 5);
        let obs = gen::observable(&mut rng, &space, 5);
        let event = gen::event(&mut rng, &obs);
        let uniform = MixedState::uniform(space.clone());

        match (fisher_mle(&obs, &event), bayes_posterior(&obs, &uniform, &event)) {
            (Ok(fisher), Ok(bayes)) => {
                let max = bayes.posterior.weights().iter().max().cloned().unwrap();
                let argmax: Vec<String> = space
                    .labels()
                    .iter()
                    .zip(bayes.posterior.weights())
                    .filter(|(_, w)| **w == max)
                    .map(|(l, _)| l.clone())
                    .collect();
                prop_assert_eq!(fisher.maximizers, argmax);
            }
            (Err(Error::ZeroLikelihoodEverywhere), Err(Error::ZeroEvidence)) => {}
            (got_f, got_b) => {
                return Err(TestCaseError::fail(format!(
                    "fisher and uniform bayes disagree: {got_f:?} vs {got_b:?}"
                )));
            }
        }
    }

    #[test]
    fn rescaling_an_event_leaves_the_maximizers_fixed(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let space = gen::space(&mut rng, "w", 4);
        let obs = gen::observable(&mut rng, &space, 4);
        let event = gen::event(&mut rng, &obs);
        let base = match fisher_mle(&obs, &event) {
            Ok(res) => res,
            Err(_) => return Ok(()),
        };

        // Scale every effect row of the event by c in (0,1], routing the
        // removed mass to a fresh sink outcome so columns still sum to one.
        let den = rng.gen_range(1..=9);
        let num = rng.gen_range(1..=den);
        let c = r(num, den);
        let leak = Scalar::one() - &c;
        let event_f = obs.effect_function(&event).unwrap();
        let mut outcomes: Vec<String> = obs.outcomes().to_vec();
        outcomes.push("sink0".to_string());
        let mut effects: Vec<Vec<Scalar>> = obs
            .outcomes()
            .iter()
            .zip(obs.effect_rows())
            .map(|(x, row)| {
                if event.contains(x) {
                    row.iter().map(|e| e * &c).collect()
                } else {
                    row.clone()
                }
            })
            .collect();
        effects.push(event_f.iter().map(|e| e * &leak).collect());
        let scaled = Observable::new(space, outcomes, effects).unwrap();

        let res = fisher_mle(&scaled, &event).unwrap();
        prop_assert_eq!(res.maximizers, base.maximizers);
        prop_assert_eq!(res.max_likelihood, c * base.max_likelihood);
    }

    #[test]
    fn operators_compose_and_respect_pairing(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let s1 = gen::space(&mut rng, "a", 4);
        let s2 = gen::space(&mut rng, "b", 4);
        let s3 = gen::space(&mut rng, "c", 4);
        let first = gen::markov(&mut rng, &s1, &s2);
        let second = gen::markov(&mut rng, &s2, &s3);
        let composed = first.then(&second).unwrap();

        // Composition associates with application.
        let f3: Vec<Scalar> =
            (0..s3.len()).map(|_| r(rng.gen_range(-9..=9), rng.gen_range(1..=9))).collect();
        prop_assert_eq!(
            composed.apply(&f3).unwrap(),
            first.apply(&second.apply(&f3).unwrap()).unwrap()
        );

        // Pairing duality: ⟨Φ*ρ, f⟩ = ⟨ρ, Φf⟩.
        let rho = gen::state(&mut rng, &s1);
        let f2: Vec<Scalar> =
            (0..s2.len()).map(|_| r(rng.gen_range(-9..=9), rng.gen_range(1..=9))).collect();
        prop_assert_eq!(
            first.dual_apply(&rho).unwrap().pair(&f2).unwrap(),
            rho.pair(&first.apply(&f2).unwrap()).unwrap()
        );

        // Pulling back an observable commutes with taking probabilities.
        let obs = gen::observable(&mut rng, &s2, 4);
        let event = gen::event(&mut rng, &obs);
        let pulled = first.apply_observable(&obs).unwrap();
        prop_assert_eq!(
            statistical_probability(&pulled, &rho, &event).unwrap(),
            statistical_probability(&obs, &first.dual_apply(&rho).unwrap(), &event).unwrap()
        );

        // A deterministic operator maps every point mass to a point mass,
        // and conversely.
        let table: Vec<Vec<Scalar>> = (0..s1.len())
            .map(|_| {
                let mut row = vec![Scalar::zero(); s2.len()];
                row[rng.gen_range(0..s2.len())] = Scalar::one();
                row
            })
            .collect();
        let det = finmeas::MarkovOperator::new(s1.clone(), s2.clone(), table).unwrap();
        for op in [&det, &first] {
            let points_map_to_points = s1.labels().iter().all(|l| {
                let image = op.dual_apply(&MixedState::point(s1.clone(), l).unwrap()).unwrap();
                image.weights().iter().any(|w| w.is_one())
            });
            prop_assert_eq!(op.is_deterministic(), points_map_to_points);
        }
    }

    #[test]
    fn chain_composition_follows_the_tree_paths(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let family = gen::chain(&mut rng, 4, 4);
        let ids: Vec<String> = family.tree().node_ids().to_vec();
        let last = ids.len() - 1;
        let i = rng.gen_range(0..=last);
        let k = rng.gen_range(i..=last);
        let j = rng.gen_range(i..=k);

        let whole = family.compose(&ids[i], &ids[k]).unwrap();
        let left = family.compose(&ids[i], &ids[j]).unwrap();
        let right = family.compose(&ids[j], &ids[k]).unwrap();
        prop_assert_eq!(whole.clone(), left.then(&right).unwrap());

        // Composing a node with itself is the identity.
        let space = family.tree().space_of(&ids[i]).unwrap().clone();
        prop_assert_eq!(
            family.compose(&ids[i], &ids[i]).unwrap(),
            finmeas::MarkovOperator::identity(space)
        );

        // Walking against the arrow of time is rejected.
        if i < k {
            prop_assert!(matches!(
                family.compose(&ids[k], &ids[i]),
                Err(Error::NotComparable(_, _))
            ));
        }
    }

    #[test]
    fn mixtures_enumerate_members(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let space = gen::space(&mut rng, "w", 5);
        let obs = gen::observable(&mut rng, &space, 5);
        let weights = gen::weights(&mut rng, space.len());
        let family = WeightedObservableFamily::cyclic(obs.clone(), weights.clone()).unwrap();
        let event = gen::event(&mut rng, &obs);
        let point = space.label(rng.gen_range(0..space.len())).to_string();

        // Mixture probability enumerates the members.
        let by_members: Scalar = (1..=family.len())
            .map(|k| {
                let member = family.member(k).unwrap();
                member.effect(&event, &point).unwrap() * &weights[k - 1]
            })
            .sum();
        let mixed = family.mixture_probability(&point, &event).unwrap();
        prop_assert_eq!(&mixed, &by_members);

        // Pairing the mixture state with the base effect gives the same
        // number.
        let paired = family
            .mixture_state(&point)
            .unwrap()
            .pair(&obs.effect_function(&event).unwrap())
            .unwrap();
        prop_assert_eq!(&mixed, &paired);
    }

    #[test]
    fn uniform_families_reduce_to_a_statistical_measurement(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let space = gen::space(&mut rng, "w", 5);
        let obs = gen::observable(&mut rng, &space, 5);
        let family = WeightedObservableFamily::uniform_cyclic(obs.clone()).unwrap();

        let reduced = family.equal_probability_reduction().unwrap();
        prop_assert_eq!(&reduced, &MixedState::uniform(space.clone()));
        prop_assert!(family.is_state_independent());

        // Every point's mixture distribution equals a single statistical
        // measurement under the reduced state.
        let mut events: Vec<Event> = obs
            .outcomes()
            .iter()
            .map(|x| Event::singleton(x.clone()))
            .collect();
        events.push(gen::event(&mut rng, &obs));
        events.push(obs.full_event());
        for point in space.labels() {
            for event in &events {
                prop_assert_eq!(
                    family.mixture_probability(point, event).unwrap(),
                    statistical_probability(&obs, &reduced, event).unwrap()
                );
            }
        }
    }

    #[test]
    fn switch_exactly_when_the_kept_door_loses_mass(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let prior = gen::weights(&mut rng, 3);
        let alpha = open_unit(&mut rng);
        // Evidence for "opened A3" is (1-α)p1 + p2; skip the degenerate
        // corner where it vanishes.
        prop_assume!(!(prior[0].is_zero() && prior[1].is_zero()));

        let mut spec = MontyHallSpec::new(Variant::Bayes);
        spec.prior = Some([prior[0].clone(), prior[1].clone(), prior[2].clone()]);
        spec.alpha = alpha.clone();
        let verdict = spec.solve().unwrap();

        // Closed form of the posterior over (picked, other, opened).
        let kept = (Scalar::one() - &alpha) * &prior[0];
        let evidence = &kept + &prior[1];
        let posterior = verdict.posterior.as_ref().unwrap();
        prop_assert_eq!(posterior.weights()[0].clone(), &kept / &evidence);
        prop_assert_eq!(posterior.weights()[1].clone(), &prior[1] / &evidence);
        prop_assert!(posterior.weights()[2].is_zero());

        let expected = match kept.cmp(&prior[1]) {
            std::cmp::Ordering::Less => VerdictKind::Switch,
            std::cmp::Ordering::Equal => VerdictKind::Indifferent,
            std::cmp::Ordering::Greater => VerdictKind::Stay,
        };
        prop_assert_eq!(verdict.kind, expected);
    }

    #[test]
    fn happiness_tracks_the_askers_posterior_mass(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let prior = gen::weights(&mut rng, 3);
        let alpha = open_unit(&mut rng);
        prop_assume!(!(prior[0].is_zero() && prior[1].is_zero()));

        let mut spec = PrisonersSpec::new(Variant::Bayes);
        spec.prior = Some([prior[0].clone(), prior[1].clone(), prior[2].clone()]);
        spec.alpha = alpha.clone();
        let verdict = spec.solve().unwrap();

        let posterior = verdict.posterior.as_ref().unwrap();
        let before = &prior[0];
        let after = &posterior.weights()[0];
        let expected = match after.cmp(before) {
            std::cmp::Ordering::Greater => VerdictKind::HappinessIncreases,
            std::cmp::Ordering::Equal => VerdictKind::HappinessInvariant,
            std::cmp::Ordering::Less => VerdictKind::HappinessDecreases,
        };
        prop_assert_eq!(verdict.kind, expected);

        // The two stories share one observable, so the posteriors agree.
        let mut monty = MontyHallSpec::new(Variant::Bayes);
        monty.prior = spec.prior.clone();
        monty.alpha = alpha;
        let monty_verdict = monty.solve().unwrap();
        prop_assert_eq!(monty_verdict.posterior.as_ref().unwrap(), posterior);

        // At a fair split with the asker alive somewhere, invariance pins
        // the prior: p1 = 1 - 2 p2.
        if spec.alpha == r(1, 2) && !prior[0].is_zero() {
            let pinned = prior[0] == Scalar::one() - r(2, 1) * &prior[1];
            prop_assert_eq!(verdict.kind == VerdictKind::HappinessInvariant, pinned);
        }
    }

    #[test]
    fn listing_the_doors_in_another_order_changes_nothing(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let prior = gen::weights(&mut rng, 3);
        let alpha = open_unit(&mut rng);
        prop_assume!(!(prior[0].is_zero() && prior[1].is_zero()));

        let mut base = MontyHallSpec::new(Variant::Bayes);
        base.prior = Some([prior[0].clone(), prior[1].clone(), prior[2].clone()]);
        base.alpha = alpha.clone();

        // Re-list the same doors in a random order. The first-listed
        // openable door carries α, so a flipped listing needs 1-α to
        // describe the same host.
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let perm = perms[rng.gen_range(0..perms.len())];
        let mut relisted = base.clone();
        relisted.doors = [
            base.doors[perm[0]].clone(),
            base.doors[perm[1]].clone(),
            base.doors[perm[2]].clone(),
        ];
        relisted.prior = Some([
            prior[perm[0]].clone(),
            prior[perm[1]].clone(),
            prior[perm[2]].clone(),
        ]);
        let openable: Vec<&String> =
            relisted.doors.iter().filter(|d| **d != relisted.picked).collect();
        if *openable[0] != base.doors[1] {
            relisted.alpha = Scalar::one() - &alpha;
        }

        // Identical effects label by label, hence identical verdicts.
        let obs_base = base.observable().unwrap();
        let obs_relisted = relisted.observable().unwrap();
        for outcome in obs_base.outcomes() {
            for point in obs_base.space().labels() {
                prop_assert_eq!(
                    obs_base.singleton_effect(outcome, point).unwrap(),
                    obs_relisted.singleton_effect(outcome, point).unwrap()
                );
            }
        }

        let v_base = base.solve().unwrap();
        let v_relisted = relisted.solve().unwrap();
        prop_assert_eq!(v_base.kind, v_relisted.kind);
        let p_base = v_base.posterior.unwrap();
        let p_relisted = v_relisted.posterior.unwrap();
        for door in &base.doors {
            prop_assert_eq!(p_base.weight(door).unwrap(), p_relisted.weight(door).unwrap());
        }
    }

    #[test]
    fn likelihood_inference_ignores_the_hosts_bias(seed in any::<u64>()) {
        let mut rng = rng_for(seed);
        let first = open_unit(&mut rng);
        let second = open_unit(&mut rng);

        let mut monty = MontyHallSpec::new(Variant::Fisher);
        monty.alpha = first.clone();
        let a = monty.solve().unwrap();
        monty.alpha = second.clone();
        let b = monty.solve().unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.kind, VerdictKind::Switch);
        prop_assert_eq!(a.inferred_state.as_deref(), Some(&["A2".to_string()][..]));

        let mut prisoners = PrisonersSpec::new(Variant::Fisher);
        prisoners.alpha = first;
        let a = prisoners.solve().unwrap();
        prisoners.alpha = second;
        let b = prisoners.solve().unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.kind, VerdictKind::NotWellPosed);
        prop_assert!(a.inferred_state.is_some());
    }

    #[test]
    fn scalar_arithmetic_and_serialization_round_trip(
        an in -99i64..=99, ad in 1i64..=99,
        bn in -99i64..=99, bd in 1i64..=99,
        cn in -99i64..=99, cd in 1i64..=99,
    ) {
        let a = r(an, ad);
        let b = r(bn, bd);
        let c = r(cn, cd);

        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert_eq!(&a - &a, Scalar::zero());
        if !b.is_zero() {
            prop_assert_eq!((&a / &b) * &b, a.clone());
        }

        let json = serde_json::to_string(&a).unwrap();
        let back: Scalar = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &a);
        let shown: Scalar = a.to_string().parse().unwrap();
        prop_assert_eq!(&shown, &a);
    }
}
