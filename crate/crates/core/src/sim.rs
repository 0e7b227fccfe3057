//! Monte Carlo oracle for the three-point host/emperor story.
//!
//! The generative story is simulated directly, with no reference to the
//! exact kernel: draw the hidden state from the prior, then emit the
//! utterance (forced when the hidden state is not the observer's point, an
//! α-coin between the two admissible utterances when it is). Conditional
//! frequencies can then be compared against analytic posteriors through
//! z-scores.
//!
//! The simulation runs in the canonical frame: labels A1/A2/A3 with A1 as
//! the observer's point, matching the default problem specs. One engine
//! serves both stories; only the reading of the labels differs.
//!
//! Reproducibility contract: each trial derives its randomness from the
//! seed and its own trial index (one RNG stream per trial), and tallies are
//! integer counts, so identical configs give bit-identical reports no
//! matter how many workers participate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{check_weights, MixedState};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Configuration of one simulation run.
#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub prior: [Scalar; 3],
    pub alpha: Scalar,
    pub trials: u64,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(prior: [Scalar; 3], alpha: Scalar, trials: u64, seed: u64) -> Self {
        SimConfig { prior, alpha, trials, seed }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::ZeroTrials);
        }
        check_weights(&self.prior, "prior")?;
        if self.alpha <= Scalar::zero() || self.alpha >= Scalar::one() {
            return Err(Error::InvalidAlpha(self.alpha.clone()));
        }
        Ok(())
    }
}

/// Tallies of one run. `counts[m][u]` counts trials with hidden state `m`
/// and utterance `u`, indices in label order A1/A2/A3.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimReport {
    pub labels: [String; 3],
    pub trials: u64,
    pub counts: [[u64; 3]; 3],
    /// `conditional[u][m]`: frequency of hidden state `m` among trials that
    /// uttered `u`; 0.0 when `u` never occurred.
    pub conditional: [[f64; 3]; 3],
    /// Trials whose utterance was the observer's point. Must be 0.
    pub invalid_observer_utterances: u64,
    /// Trials whose utterance revealed the hidden state. Must be 0.
    pub invalid_revealing_utterances: u64,
}

#[derive(Clone, Default)]
struct Tally {
    counts: [[u64; 3]; 3],
    invalid_observer: u64,
    invalid_reveal: u64,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        for m in 0..3 {
            for u in 0..3 {
                self.counts[m][u] += other.counts[m][u];
            }
        }
        self.invalid_observer += other.invalid_observer;
        self.invalid_reveal += other.invalid_reveal;
        self
    }
}

/// One trial's (hidden state, utterance), from its own RNG stream.
fn draw(seed: u64, trial: u64, c1: f64, c12: f64, alpha: f64) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let x: f64 = rng.gen();
    let state = if x < c1 {
        0
    } else if x < c12 {
        1
    } else {
        2
    };
    let utterance = match state {
        0 => {
            if rng.gen::<f64>() < alpha {
                1
            } else {
                2
            }
        }
        1 => 2,
        _ => 1,
    };
    (state, utterance)
}

/// Run the generative story `config.trials` times.
pub fn simulate(config: &SimConfig) -> Result<SimReport> {
    config.validate()?;
    let c1 = config.prior[0].to_f64();
    let c12 = (&config.prior[0] + &config.prior[1]).to_f64();
    let alpha = config.alpha.to_f64();
    let seed = config.seed;

    let tally = (0..config.trials)
        .into_par_iter()
        .fold(Tally::default, |mut t, trial| {
            let (state, utterance) = draw(seed, trial, c1, c12, alpha);
            t.counts[state][utterance] += 1;
            if utterance == 0 {
                t.invalid_observer += 1;
            }
            if utterance == state {
                t.invalid_reveal += 1;
            }
            t
        })
        .reduce(Tally::default, Tally::merge);

    let mut conditional = [[0.0f64; 3]; 3];
    for (u, row) in conditional.iter_mut().enumerate() {
        let n_u: u64 = (0..3).map(|m| tally.counts[m][u]).sum();
        if n_u > 0 {
            for (m, cell) in row.iter_mut().enumerate() {
                *cell = tally.counts[m][u] as f64 / n_u as f64;
            }
        }
    }

    Ok(SimReport {
        labels: ["A1".to_string(), "A2".to_string(), "A3".to_string()],
        trials: config.trials,
        counts: tally.counts,
        conditional,
        invalid_observer_utterances: tally.invalid_observer,
        invalid_revealing_utterances: tally.invalid_reveal,
    })
}

/// z-scores of the empirical conditional distribution given one utterance
/// against an analytic posterior.
#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub utterance: String,
    pub conditioning_count: u64,
    pub analytic: [f64; 3],
    pub frequency: [f64; 3],
    pub z: [f64; 3],
}

impl Comparison {
    pub fn max_abs_z(&self) -> f64 {
        self.z.iter().fold(0.0f64, |acc, z| acc.max(z.abs()))
    }
}

impl SimReport {
    /// Utterance counts in label order.
    pub fn marginals(&self) -> [u64; 3] {
        let mut out = [0u64; 3];
        for (u, slot) in out.iter_mut().enumerate() {
            *slot = (0..3).map(|m| self.counts[m][u]).sum();
        }
        out
    }

    /// z = (freq − analytic) / sqrt(analytic(1−analytic)/n_cond) per point,
    /// conditioning on one utterance. When the analytic value is 0 or 1 the
    /// standard error vanishes; an exactly matching frequency scores 0 and
    /// any mismatch scores ±∞.
    pub fn compare(&self, analytic: &MixedState, utterance: &str) -> Result<Comparison> {
        if analytic.space().labels() != self.labels {
            return Err(Error::SpaceMismatch(
                "analytic posterior is not on the simulation's A1/A2/A3 frame".into(),
            ));
        }
        let u = self
            .labels
            .iter()
            .position(|l| l == utterance)
            .ok_or_else(|| Error::UnknownOutcome(utterance.to_string()))?;
        let n_cond: u64 = (0..3).map(|m| self.counts[m][u]).sum();
        if n_cond == 0 {
            return Err(Error::NoConditioningEvents(utterance.to_string()));
        }
        let mut comparison = Comparison {
            utterance: utterance.to_string(),
            conditioning_count: n_cond,
            analytic: [0.0; 3],
            frequency: [0.0; 3],
            z: [0.0; 3],
        };
        for m in 0..3 {
            let a = analytic.weights()[m].to_f64();
            let freq = self.counts[m][u] as f64 / n_cond as f64;
            let se = (a * (1.0 - a) / n_cond as f64).sqrt();
            comparison.analytic[m] = a;
            comparison.frequency[m] = freq;
            comparison.z[m] = if se > 0.0 {
                (freq - a) / se
            } else if freq == a {
                0.0
            } else if freq > a {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            };
        }
        Ok(comparison)
    }

    /// The counts table as CSV: one row per hidden state, one column per
    /// utterance.
    pub fn counts_csv(&self) -> String {
        let mut out = String::from("state");
        for label in &self.labels {
            out.push(',');
            out.push_str(label);
        }
        out.push('\n');
        for (m, label) in self.labels.iter().enumerate() {
            out.push_str(label);
            for u in 0..3 {
                out.push(',');
                out.push_str(&self.counts[m][u].to_string());
            }
            out.push('\n');
        }
        out
    }
}
