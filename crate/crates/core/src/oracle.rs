//! Simulated annotator whose labels degrade with per-class memory decay.
//!
//! The oracle keeps one clock per class: the annotation step at which it
//! last produced that class. Annotation events are numbered from 1 and all
//! clocks start at 0. When event `n` asks for a label on an instance of
//! class `c`, the elapsed steps `n - last_seen[c]` feed the decay curve, and
//! with that probability the oracle answers with a different class. Two
//! back-to-back events of the same class are therefore one step apart.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{ClassLabel, StreamInstance};
use crate::decay::{sigmoid_score, DecayParams};
use crate::error::{Error, Result};

/// Which wrong class an erroneous annotation lands on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorTargetPolicy {
    /// The other class the annotator produced most recently.
    #[default]
    MostActivated,
    /// Any other class, uniformly.
    UniformOther,
}

impl FromStr for ErrorTargetPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "most_activated" => Ok(ErrorTargetPolicy::MostActivated),
            "uniform_other" => Ok(ErrorTargetPolicy::UniformOther),
            other => Err(Error::invalid(
                "error_target_policy",
                format!("unknown policy `{other}` (expected most_activated or uniform_other)"),
            )),
        }
    }
}

impl fmt::Display for ErrorTargetPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorTargetPolicy::MostActivated => "most_activated",
            ErrorTargetPolicy::UniformOther => "uniform_other",
        })
    }
}

/// Which label resets a class clock after an annotation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClockKey {
    /// The label the oracle assigned.
    #[default]
    Assigned,
    /// The instance's ground-truth class.
    True,
}

impl FromStr for ClockKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "assigned" => Ok(ClockKey::Assigned),
            "true" => Ok(ClockKey::True),
            other => Err(Error::invalid(
                "clock",
                format!("unknown clock key `{other}` (expected assigned or true)"),
            )),
        }
    }
}

impl fmt::Display for ClockKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClockKey::Assigned => "assigned",
            ClockKey::True => "true",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub params: DecayParams,
    #[serde(default)]
    pub error_target_policy: ErrorTargetPolicy,
    #[serde(default)]
    pub clock: ClockKey,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnotationResult {
    pub instance_id: String,
    pub true_class: ClassLabel,
    pub assigned_label: ClassLabel,
    pub was_error: bool,
    pub error_probability_used: f64,
    /// Steps since the true class was last produced.
    pub elapsed: u64,
    /// One-based index of this annotation event.
    pub step: u64,
}

#[derive(Clone, Debug)]
pub struct OracleState {
    config: OracleConfig,
    num_classes: usize,
    step_counter: u64,
    last_seen: Vec<u64>,
    rng: ChaCha8Rng,
}

impl OracleState {
    pub fn new(config: OracleConfig, num_classes: usize) -> Result<Self> {
        config.params.validate()?;
        if num_classes < 2 {
            return Err(Error::invalid("num_classes", "the oracle needs at least two classes"));
        }
        let rng = ChaCha8Rng::seed_from_u64(config.seed);
        Ok(OracleState {
            config,
            num_classes,
            step_counter: 0,
            last_seen: vec![0; num_classes],
            rng,
        })
    }

    pub fn config(&self) -> &OracleConfig {
        &self.config
    }

    pub fn step_counter(&self) -> u64 {
        self.step_counter
    }

    pub fn last_seen(&self) -> &[u64] {
        &self.last_seen
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    /// Overrides the clocks, e.g. to place the oracle deep into a stream.
    pub fn set_clocks(&mut self, step_counter: u64, last_seen: Vec<u64>) -> Result<()> {
        if last_seen.len() != self.num_classes {
            return Err(Error::invalid(
                "last_seen",
                format!("expected {} clocks", self.num_classes),
            ));
        }
        if last_seen.iter().any(|&s| s > step_counter) {
            return Err(Error::invalid(
                "last_seen",
                "clock values cannot exceed the step counter",
            ));
        }
        self.step_counter = step_counter;
        self.last_seen = last_seen;
        Ok(())
    }

    /// Elapsed steps `class` would see at the next annotation event.
    pub fn elapsed(&self, class: ClassLabel) -> u64 {
        self.step_counter + 1 - self.last_seen[class.offset()]
    }

    pub fn error_probability(&self, class: ClassLabel) -> f64 {
        sigmoid_score(&self.config.params, self.elapsed(class) as f64)
    }

    /// Labels one instance and advances the clocks.
    pub fn annotate(&mut self, instance: &StreamInstance) -> AnnotationResult {
        let truth = instance.true_class;
        assert!(
            truth.index() <= self.num_classes,
            "class {truth} outside oracle class range"
        );
        let elapsed = self.elapsed(truth);
        let (assigned, p_err) = self.draw_label(truth, elapsed as f64);

        self.step_counter += 1;
        let key = match self.config.clock {
            ClockKey::Assigned => assigned,
            ClockKey::True => truth,
        };
        self.last_seen[key.offset()] = self.step_counter;

        AnnotationResult {
            instance_id: instance.id.clone(),
            true_class: truth,
            assigned_label: assigned,
            was_error: assigned != truth,
            error_probability_used: p_err,
            elapsed,
            step: self.step_counter,
        }
    }

    /// One label draw at a given elapsed time, without touching the clocks.
    ///
    /// Consumes exactly one uniform draw for the error decision, plus one
    /// more when a uniform wrong class has to be picked.
    pub fn draw_label(&mut self, truth: ClassLabel, elapsed: f64) -> (ClassLabel, f64) {
        let p_err = sigmoid_score(&self.config.params, elapsed);
        let u: f64 = self.rng.random();
        if u >= p_err {
            return (truth, p_err);
        }
        let wrong = match self.config.error_target_policy {
            ErrorTargetPolicy::MostActivated => self.most_activated_other(truth),
            ErrorTargetPolicy::UniformOther => {
                let pick = self.rng.random_range(0..self.num_classes - 1);
                let offset = if pick >= truth.offset() { pick + 1 } else { pick };
                ClassLabel::from_offset(offset)
            }
        };
        (wrong, p_err)
    }

    /// The class other than `exclude` with the most recent clock; ties go
    /// to the lowest index.
    pub fn most_activated_other(&self, exclude: ClassLabel) -> ClassLabel {
        most_activated_other(&self.last_seen, exclude)
    }
}

pub fn most_activated_other(last_seen: &[u64], exclude: ClassLabel) -> ClassLabel {
    let mut best: Option<(usize, u64)> = None;
    for (offset, &seen) in last_seen.iter().enumerate() {
        if offset == exclude.offset() {
            continue;
        }
        if best.is_none_or(|(_, s)| seen > s) {
            best = Some((offset, seen));
        }
    }
    ClassLabel::from_offset(best.expect("at least two classes").0)
}
