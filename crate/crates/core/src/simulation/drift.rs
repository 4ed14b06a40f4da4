//! Synthetic text streams with a drifting class mix.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{ClassLabel, StreamInstance};
use crate::error::{Error, Result};

/// Shape of a synthetic stream.
///
/// Each class owns a disjoint block of tokens; a shared block acts as noise.
/// Every instance also borrows tokens from one other class, so some items are
/// genuinely ambiguous.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftSpec {
    pub num_classes: usize,
    /// One class distribution per interval.
    pub mixes: Vec<Vec<f64>>,
    pub instances_per_interval: usize,
    pub vocab_per_class: usize,
    pub shared_vocab: usize,
    pub tokens_per_instance: usize,
    /// Chance that a token is drawn from the shared noise block.
    pub noise_rate: f64,
    /// Chance that a token is drawn from the instance's confusing class.
    pub confusion_rate: f64,
}

impl DriftSpec {
    /// Same mix in every interval.
    pub fn stationary(mix: Vec<f64>, intervals: usize, instances_per_interval: usize) -> Self {
        DriftSpec {
            num_classes: mix.len(),
            mixes: vec![mix; intervals],
            instances_per_interval,
            ..DriftSpec::hurricane(1)
        }
    }

    /// Four-class population drift loosely following a hurricane timeline.
    /// Irrelevant chatter is three quarters of the traffic throughout; among
    /// the relevant posts, damage reports and affected people come first and
    /// donation and volunteering traffic grows later.
    pub fn hurricane(intervals: usize) -> Self {
        let start = [0.12, 0.02, 0.11, 0.75];
        let end = [0.04, 0.17, 0.04, 0.75];
        let mixes = (0..intervals)
            .map(|i| {
                let w = if intervals > 1 {
                    i as f64 / (intervals - 1) as f64
                } else {
                    0.0
                };
                start.iter().zip(&end).map(|(s, e)| s + w * (e - s)).collect()
            })
            .collect();
        DriftSpec {
            num_classes: 4,
            mixes,
            instances_per_interval: 45,
            vocab_per_class: 40,
            shared_vocab: 60,
            tokens_per_instance: 8,
            noise_rate: 0.25,
            confusion_rate: 0.3,
        }
    }

    pub fn total_instances(&self) -> usize {
        self.mixes.len() * self.instances_per_interval
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_classes < 2 {
            return Err(Error::invalid("drift.num_classes", "at least two classes are needed"));
        }
        if self.mixes.is_empty() {
            return Err(Error::invalid("drift.mixes", "at least one interval is needed"));
        }
        for (i, mix) in self.mixes.iter().enumerate() {
            if mix.len() != self.num_classes {
                return Err(Error::invalid(
                    "drift.mixes",
                    format!(
                        "interval {i} has {} weights for {} classes",
                        mix.len(),
                        self.num_classes
                    ),
                ));
            }
            if mix.iter().any(|w| !w.is_finite() || *w < 0.0) {
                return Err(Error::invalid(
                    "drift.mixes",
                    format!("interval {i} has a negative or non-finite weight"),
                ));
            }
            let total: f64 = mix.iter().sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::invalid(
                    "drift.mixes",
                    format!("interval {i} sums to {total}, not 1"),
                ));
            }
        }
        if self.instances_per_interval == 0 || self.vocab_per_class == 0 || self.tokens_per_instance == 0 {
            return Err(Error::invalid(
                "drift",
                "instance count, class vocabulary and text length must be positive",
            ));
        }
        let rates_ok = (0.0..=1.0).contains(&self.noise_rate)
            && (0.0..=1.0).contains(&self.confusion_rate)
            && self.noise_rate + self.confusion_rate <= 1.0;
        if !rates_ok {
            return Err(Error::invalid(
                "drift",
                "noise and confusion rates must be probabilities summing to at most 1",
            ));
        }
        if self.noise_rate > 0.0 && self.shared_vocab == 0 {
            return Err(Error::invalid(
                "drift.shared_vocab",
                "noise tokens need a shared vocabulary",
            ));
        }
        Ok(())
    }
}

/// Generates the stream; arrival times are ordinal steps.
pub fn generate_drift_stream(spec: &DriftSpec, seed: u64) -> Result<Vec<StreamInstance>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(spec.total_instances());
    for (interval, mix) in spec.mixes.iter().enumerate() {
        let picker = WeightedIndex::new(mix).map_err(|e| Error::invalid("drift.mixes", e.to_string()))?;
        for j in 0..spec.instances_per_interval {
            let class = picker.sample(&mut rng);
            let text = synth_text(spec, class, &mut rng);
            let step = interval * spec.instances_per_interval + j;
            out.push(StreamInstance::new(
                format!("d{interval:03}-{j:04}"),
                step as f64,
                text,
                ClassLabel::from_offset(class),
            ));
        }
    }
    Ok(out)
}

fn synth_text<R: Rng>(spec: &DriftSpec, class: usize, rng: &mut R) -> String {
    let other = {
        let pick = rng.random_range(0..spec.num_classes - 1);
        if pick >= class {
            pick + 1
        } else {
            pick
        }
    };
    let tokens: Vec<String> = (0..spec.tokens_per_instance)
        .map(|_| {
            let u: f64 = rng.random();
            if u < spec.noise_rate {
                format!("n{}", rng.random_range(0..spec.shared_vocab))
            } else if u < spec.noise_rate + spec.confusion_rate {
                format!("k{}w{}", other + 1, rng.random_range(0..spec.vocab_per_class))
            } else {
                format!("k{}w{}", class + 1, rng.random_range(0..spec.vocab_per_class))
            }
        })
        .collect();
    tokens.join(" ")
}
