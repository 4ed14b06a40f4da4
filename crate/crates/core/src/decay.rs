//! Sigmoid memory-decay model.
//!
//! The probability that an annotator errs on a class grows with the number
//! of annotation steps `t` since they last handled that class:
//!
//! ```text
//! score(t) = gamma / (1 + exp(-alpha * t + beta))
//! ```
//!
//! `gamma` is the asymptotic error ceiling, `alpha` the rate and `beta` the
//! offset that fixes the error level at `t = 0`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl DecayParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let params = DecayParams { alpha, beta, gamma };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::invalid(
                "alpha",
                format!("must be finite and >= 0, got {}", self.alpha),
            ));
        }
        if !self.beta.is_finite() {
            return Err(Error::invalid("beta", "must be finite"));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::invalid(
                "gamma",
                format!("must lie in [0, 1], got {}", self.gamma),
            ));
        }
        Ok(())
    }
}

/// Named parameter sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecayPreset {
    /// Fitted to the error rates of the crowd study.
    Slow,
    /// Converges to certain error faster than `Slow`.
    Fast,
    /// Error-free annotator.
    None,
}

impl DecayPreset {
    pub const ALL: [DecayPreset; 3] = [DecayPreset::Slow, DecayPreset::Fast, DecayPreset::None];

    pub fn params(self) -> DecayParams {
        match self {
            DecayPreset::Slow => DecayParams {
                alpha: 0.0434,
                beta: 0.9025,
                gamma: 0.75,
            },
            DecayPreset::Fast => DecayParams {
                alpha: 0.03,
                beta: 1.00,
                gamma: 1.00,
            },
            // gamma = 0 keeps the score at zero for every t.
            DecayPreset::None => DecayParams {
                alpha: 0.0,
                beta: 0.0,
                gamma: 0.0,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DecayPreset::Slow => "slow",
            DecayPreset::Fast => "fast",
            DecayPreset::None => "none",
        }
    }
}

impl fmt::Display for DecayPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecayPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "slow" => Ok(DecayPreset::Slow),
            "fast" => Ok(DecayPreset::Fast),
            "none" => Ok(DecayPreset::None),
            other => Err(Error::invalid(
                "decay preset",
                format!("unknown preset `{other}` (expected slow, fast or none)"),
            )),
        }
    }
}

impl From<DecayPreset> for DecayParams {
    fn from(p: DecayPreset) -> Self {
        p.params()
    }
}

/// Error probability after `t` steps without seeing a class.
pub fn decaying_score(params: &DecayParams, t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::NegativeElapsed(t));
    }
    Ok(sigmoid_score(params, t))
}

pub(crate) fn sigmoid_score(params: &DecayParams, t: f64) -> f64 {
    if params.gamma == 0.0 {
        return 0.0;
    }
    params.gamma / (1.0 + (-params.alpha * t + params.beta).exp())
}
