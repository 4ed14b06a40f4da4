use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::classifier::{argmax, Featurizer, OnlineClassifier};
use crate::dataset::{ClassLabel, StreamInstance};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplerPolicy {
    /// Uniform sample, sized to match what uncertainty sampling would pick.
    Random,
    /// Instances whose top class probability lies in the uncertainty band.
    Uncertainty,
    /// Uncertainty sampling minus instances predicted as the discarded class.
    ErrorAvoidance,
}

impl SamplerPolicy {
    pub const ALL: [SamplerPolicy; 3] = [
        SamplerPolicy::Random,
        SamplerPolicy::Uncertainty,
        SamplerPolicy::ErrorAvoidance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SamplerPolicy::Random => "random",
            SamplerPolicy::Uncertainty => "uncertainty",
            SamplerPolicy::ErrorAvoidance => "error_avoidance",
        }
    }
}

impl fmt::Display for SamplerPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SamplerPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "random" => Ok(SamplerPolicy::Random),
            "uncertainty" => Ok(SamplerPolicy::Uncertainty),
            "error_avoidance" => Ok(SamplerPolicy::ErrorAvoidance),
            other => Err(Error::invalid(
                "sampler.policy",
                format!("unknown policy `{other}` (expected random, uncertainty or error_avoidance)"),
            )),
        }
    }
}

/// Inclusive band on the top class probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyBand {
    pub low: f64,
    pub high: f64,
}

impl UncertaintyBand {
    pub fn new(low: f64, high: f64) -> Result<Self> {
        let band = UncertaintyBand { low, high };
        band.validate()?;
        Ok(band)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 <= self.low && self.low < self.high && self.high <= 1.0) {
            return Err(Error::invalid(
                "sampler.band",
                format!("need 0 <= low < high <= 1, got [{}, {}]", self.low, self.high),
            ));
        }
        Ok(())
    }
}

impl Default for UncertaintyBand {
    fn default() -> Self {
        UncertaintyBand { low: 0.30, high: 0.70 }
    }
}

pub fn is_uncertain(proba: &[f64], band: &UncertaintyBand) -> bool {
    let top = proba.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    band.low <= top && top <= band.high
}

/// Indices of uncertain rows, in input order.
pub fn select_uncertain(probas: &[Vec<f64>], band: &UncertaintyBand) -> Vec<usize> {
    probas
        .iter()
        .enumerate()
        .filter(|(_, p)| is_uncertain(p, band))
        .map(|(i, _)| i)
        .collect()
}

/// Uncertain rows whose predicted class is not `discarded`.
pub fn select_error_avoidance(
    probas: &[Vec<f64>],
    band: &UncertaintyBand,
    discarded: Option<ClassLabel>,
) -> Vec<usize> {
    let mut selected = select_uncertain(probas, band);
    if let Some(d) = discarded {
        selected.retain(|&i| argmax(&probas[i]) != d.offset());
    }
    selected
}

fn batch_probas(batch: &[StreamInstance], model: &OnlineClassifier, featurizer: &Featurizer) -> Vec<Vec<f64>> {
    batch
        .iter()
        .map(|i| model.predict_proba(&featurizer.featurize(&i.text)))
        .collect()
}

pub fn sample_uncertainty(
    batch: &[StreamInstance],
    model: &OnlineClassifier,
    featurizer: &Featurizer,
    band: &UncertaintyBand,
) -> Vec<usize> {
    select_uncertain(&batch_probas(batch, model, featurizer), band)
}

pub fn sample_error_avoidance(
    batch: &[StreamInstance],
    model: &OnlineClassifier,
    featurizer: &Featurizer,
    band: &UncertaintyBand,
    discarded: Option<ClassLabel>,
) -> Vec<usize> {
    select_error_avoidance(&batch_probas(batch, model, featurizer), band, discarded)
}

/// `count` distinct indices below `batch_len`, in draw order.
pub fn sample_random<R: Rng + ?Sized>(batch_len: usize, count: usize, rng: &mut R) -> Vec<usize> {
    let count = if count > batch_len {
        log::warn!("random sample of {count} requested from a batch of {batch_len}; clamping");
        batch_len
    } else {
        count
    };
    index::sample(rng, batch_len, count).into_vec()
}
