//! The `check` subcommand: self-contained invariant groups, each reporting
//! pass/fail independently. Randomized groups are seeded, so a given
//! `--seed`/`--trials` pair always produces the same outcome.

use finmeas::gen;
use finmeas::sim::{simulate, SimConfig};
use finmeas::{
    bayes_posterior, statistical_probability, Event, MixedState, MontyHallSpec, Observable,
    PrisonersSpec, Scalar, StateSpace, Variant, VerdictKind, WeightedObservableFamily,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Group {
    pub name: &'static str,
    pub result: Result<(), String>,
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if $cond {
        } else {
            return Err(format!($($arg)*));
        }
    };
}

pub fn run_all(trials: u64, seed: u64, fixture: Option<&str>) -> Vec<Group> {
    let mut groups = vec![
        Group { name: "observable_axioms", result: observable_axioms(seed) },
        Group { name: "causality_laws", result: causality_laws(seed) },
        Group { name: "equal_weight_reduction", result: equal_weight_reduction() },
        Group { name: "puzzle_verdicts", result: puzzle_verdicts() },
        Group { name: "simulation_agreement", result: simulation_agreement(trials, seed) },
    ];
    if let Some(path) = fixture {
        groups.push(Group { name: "fixture", result: fixture_is_valid(path) });
    }
    groups
}

fn r(num: i64, den: i64) -> Scalar {
    Scalar::ratio(num, den).expect("static ratio")
}

/// Normalization, additivity, and monotonicity on random observables.
fn observable_axioms(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let space = gen::space(&mut rng, "w", 5);
        let obs = gen::observable(&mut rng, &space, 5);
        let first = gen::event(&mut rng, &obs);
        let second: Event = obs
            .outcomes()
            .iter()
            .filter(|x| !first.contains(x))
            .filter(|_| rng.gen_bool(0.5))
            .cloned()
            .collect();
        let union = first.union(&second);
        for point in space.labels() {
            let total: Scalar = obs
                .outcomes()
                .iter()
                .map(|x| obs.singleton_effect(x, point).expect("valid pair").clone())
                .sum();
            ensure!(total.is_one(), "effects at {point} sum to {total}");
            let a = obs.effect(&first, point).expect("valid event");
            let b = obs.effect(&second, point).expect("valid event");
            let u = obs.effect(&union, point).expect("valid event");
            ensure!(&a + &b == u, "additivity failed at {point}");
            ensure!(a <= u && u <= Scalar::one(), "monotonicity failed at {point}");
        }
    }
    Ok(())
}

/// Composition along chains and the pairing identity.
fn causality_laws(seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    for _ in 0..100 {
        let family = gen::chain(&mut rng, 4, 4);
        let ids: Vec<String> = family.tree().node_ids().to_vec();
        let last = ids.len() - 1;
        let mid = rng.gen_range(0..=last);
        let whole = family.compose(&ids[0], &ids[last]).expect("chain is ordered");
        let left = family.compose(&ids[0], &ids[mid]).expect("chain is ordered");
        let right = family.compose(&ids[mid], &ids[last]).expect("chain is ordered");
        ensure!(
            whole == left.then(&right).expect("spaces line up"),
            "path composition differs from the direct operator"
        );

        let rho = gen::state(&mut rng, family.tree().space_of(&ids[0]).expect("known node"));
        let f: Vec<Scalar> = (0..whole.target().len())
            .map(|_| r(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
            .collect();
        let lhs = whole.dual_apply(&rho).expect("source state").pair(&f).expect("target length");
        let rhs = rho.pair(&whole.apply(&f).expect("target length")).expect("source length");
        ensure!(lhs == rhs, "pairing identity failed");
    }
    Ok(())
}

/// Uniform cyclic mixtures collapse to one statistical measurement; skewed
/// weights do not.
fn equal_weight_reduction() -> Result<(), String> {
    let obs = MontyHallSpec::new(Variant::Bayes).observable().map_err(|e| e.to_string())?;
    let points = ["A1", "A2", "A3"];
    let family = WeightedObservableFamily::uniform_cyclic(obs.clone()).map_err(|e| e.to_string())?;
    let reduced = family.equal_probability_reduction().map_err(|e| e.to_string())?;
    for mask in 0u8..8 {
        let event: Event = points
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, x)| x.to_string())
            .collect();
        let probs: Vec<Scalar> = points
            .iter()
            .map(|p| family.mixture_probability(p, &event).expect("valid point"))
            .collect();
        ensure!(
            probs[0] == probs[1] && probs[1] == probs[2],
            "mixture differs across states on {event:?}"
        );
        let statistical =
            statistical_probability(&obs, &reduced, &event).map_err(|e| e.to_string())?;
        ensure!(probs[0] == statistical, "mixture differs from its reduction on {event:?}");
    }

    let skewed =
        WeightedObservableFamily::cyclic(obs, vec![r(1, 2), r(1, 2), Scalar::zero()])
            .map_err(|e| e.to_string())?;
    ensure!(!skewed.is_state_independent(), "skewed family claimed state independence");
    Ok(())
}

/// The textbook answers, bit-exact.
fn puzzle_verdicts() -> Result<(), String> {
    let verdict = MontyHallSpec::new(Variant::EqualProbability)
        .solve()
        .map_err(|e| e.to_string())?;
    ensure!(verdict.kind == VerdictKind::Switch, "expected SWITCH, got {}", verdict.kind);
    let posterior = verdict.posterior.expect("posterior present");
    ensure!(
        posterior.weights() == [r(1, 3), r(2, 3), Scalar::zero()],
        "switch posterior was {:?}",
        posterior.weights()
    );

    let verdict = PrisonersSpec::new(Variant::EqualProbability)
        .solve()
        .map_err(|e| e.to_string())?;
    ensure!(
        verdict.kind == VerdictKind::HappinessInvariant,
        "expected HAPPINESS_INVARIANT, got {}",
        verdict.kind
    );

    let verdict = PrisonersSpec::new(Variant::Fisher).solve().map_err(|e| e.to_string())?;
    ensure!(
        verdict.kind == VerdictKind::NotWellPosed,
        "expected NOT_WELL_POSED, got {}",
        verdict.kind
    );

    // Bayes boundary and skew cases.
    let cases: [([Scalar; 3], VerdictKind, Scalar); 3] = [
        ([r(1, 2), r(1, 4), r(1, 4)], VerdictKind::Indifferent, r(1, 2)),
        ([r(1, 2), r(1, 3), r(1, 6)], VerdictKind::HappinessDecreases, r(3, 7)),
        ([r(1, 4), r(1, 4), r(1, 2)], VerdictKind::HappinessIncreases, r(1, 3)),
    ];
    for (i, (prior, expected_kind, expected_mass)) in cases.into_iter().enumerate() {
        let verdict = if i == 0 {
            let mut spec = MontyHallSpec::new(Variant::Bayes);
            spec.prior = Some(prior);
            spec.solve().map_err(|e| e.to_string())?
        } else {
            let mut spec = PrisonersSpec::new(Variant::Bayes);
            spec.prior = Some(prior);
            spec.solve().map_err(|e| e.to_string())?
        };
        ensure!(
            verdict.kind == expected_kind,
            "case {i}: expected {expected_kind}, got {}",
            verdict.kind
        );
        let posterior = verdict.posterior.expect("posterior present");
        ensure!(
            posterior.weights()[0] == expected_mass,
            "case {i}: first posterior mass was {}",
            posterior.weights()[0]
        );
    }
    Ok(())
}

/// Simulated conditionals match the exact posterior over the prior/bias
/// grid, within five standard errors.
fn simulation_agreement(trials: u64, seed: u64) -> Result<(), String> {
    let space = StateSpace::new(["A1", "A2", "A3"]).expect("three labels");
    let priors = [
        [r(1, 3), r(1, 3), r(1, 3)],
        [r(1, 2), r(1, 4), r(1, 4)],
        [r(1, 2), r(1, 3), r(1, 6)],
    ];
    let alphas = [r(1, 4), r(1, 2), r(3, 4)];
    let mut cell = 0;
    for prior in &priors {
        for alpha in &alphas {
            cell += 1;
            let config =
                SimConfig::new(prior.clone(), alpha.clone(), trials, seed.wrapping_add(cell));
            let report = simulate(&config).map_err(|e| e.to_string())?;
            ensure!(
                report.invalid_observer_utterances == 0
                    && report.invalid_revealing_utterances == 0,
                "cell {cell}: invalid utterances occurred"
            );

            let mut spec = MontyHallSpec::new(Variant::Bayes);
            spec.prior = Some(prior.clone());
            spec.alpha = alpha.clone();
            let obs = spec.observable().map_err(|e| e.to_string())?;
            let prior_state =
                MixedState::new(space.clone(), prior.to_vec()).map_err(|e| e.to_string())?;
            for utterance in ["A2", "A3"] {
                let event = Event::singleton(utterance);
                let marginal =
                    statistical_probability(&obs, &prior_state, &event).expect("valid event");
                if marginal.is_zero() {
                    continue;
                }
                let posterior =
                    bayes_posterior(&obs, &prior_state, &event).expect("positive evidence");
                let comparison =
                    report.compare(&posterior.posterior, utterance).map_err(|e| e.to_string())?;
                ensure!(
                    comparison.max_abs_z() < 5.0,
                    "cell {cell}: conditional z for {utterance} was {:?}",
                    comparison.z
                );
            }
        }
    }
    Ok(())
}

/// Parse and revalidate an observable fixture; any corruption fails the
/// group.
fn fixture_is_valid(path: &str) -> Result<(), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))?;
    let obs: Observable =
        serde_json::from_str(&text).map_err(|e| format!("observable: {e}"))?;
    let _ = obs;
    Ok(())
}
