//! Online multi-class linear model trained by seeded stochastic gradient steps.
//!
//! Scores are `W x + b`; probabilities are the softmax of the scores. The
//! default loss is multinomial cross-entropy. A Crammer-Singer hinge loss is
//! available as an alternative; probabilities are still a softmax over the
//! margins in that mode.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::features::FeatureVector;
use crate::dataset::ClassLabel;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Loss {
    #[default]
    Logistic,
    Hinge,
}

impl FromStr for Loss {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "logistic" => Ok(Loss::Logistic),
            "hinge" => Ok(Loss::Hinge),
            other => Err(Error::invalid("classifier.loss", format!("unknown loss `{other}`"))),
        }
    }
}

impl fmt::Display for Loss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Loss::Logistic => "logistic",
            Loss::Hinge => "hinge",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifierParams {
    pub learning_rate: f64,
    /// L2 penalty on the weights (biases are not penalised).
    pub l2: f64,
    /// Gradient steps per streamed instance.
    pub passes: usize,
    pub warmup_epochs: usize,
    #[serde(default)]
    pub loss: Loss,
    /// Drives the warm-up shuffling order.
    pub seed: u64,
}

impl Default for ClassifierParams {
    fn default() -> Self {
        ClassifierParams {
            learning_rate: 0.1,
            l2: 1e-4,
            passes: 5,
            warmup_epochs: 50,
            loss: Loss::Logistic,
            seed: 0,
        }
    }
}

impl ClassifierParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate >= 0.0) {
            return Err(Error::invalid("classifier.lr", "must be finite and >= 0"));
        }
        if !(self.l2.is_finite() && self.l2 >= 0.0) {
            return Err(Error::invalid("classifier.reg", "must be finite and >= 0"));
        }
        Ok(())
    }
}

/// Gradient of the per-instance objective, laid out like the model.
#[derive(Clone, Debug, PartialEq)]
pub struct Gradient {
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OnlineClassifier {
    num_classes: usize,
    dim: usize,
    /// Row-major `num_classes x dim`.
    weights: Vec<f64>,
    biases: Vec<f64>,
    params: ClassifierParams,
    update_count: u64,
}

pub fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Index of the largest entry, lowest index on ties.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

impl OnlineClassifier {
    /// Zero-initialised model.
    pub fn new(num_classes: usize, dim: usize, params: ClassifierParams) -> Result<Self> {
        if num_classes < 2 {
            return Err(Error::invalid("num_classes", "at least two classes are required"));
        }
        if dim == 0 {
            return Err(Error::invalid("dim", "must be at least 1"));
        }
        params.validate()?;
        Ok(OnlineClassifier {
            num_classes,
            dim,
            weights: vec![0.0; num_classes * dim],
            biases: vec![0.0; num_classes],
            params,
            update_count: 0,
        })
    }

    pub fn from_parts(weights: Vec<f64>, biases: Vec<f64>, params: ClassifierParams) -> Result<Self> {
        let num_classes = biases.len();
        if num_classes < 2 || weights.is_empty() || !weights.len().is_multiple_of(num_classes) {
            return Err(Error::invalid(
                "weights",
                "weight matrix does not match the bias length",
            ));
        }
        params.validate()?;
        Ok(OnlineClassifier {
            num_classes,
            dim: weights.len() / num_classes,
            weights,
            biases,
            params,
            update_count: 0,
        })
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases
    }

    pub fn params(&self) -> &ClassifierParams {
        &self.params
    }

    pub fn update_count(&self) -> u64 {
        self.update_count
    }

    pub fn scores(&self, x: &FeatureVector) -> Vec<f64> {
        assert_eq!(x.dim(), self.dim, "feature dimension mismatch");
        let x = x.values();
        self.weights
            .chunks_exact(self.dim)
            .zip(&self.biases)
            .map(|(row, b)| row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + b)
            .collect()
    }

    pub fn predict_proba(&self, x: &FeatureVector) -> Vec<f64> {
        softmax(&self.scores(x))
    }

    pub fn predict(&self, x: &FeatureVector) -> ClassLabel {
        ClassLabel::from_offset(argmax(&self.scores(x)))
    }

    /// Per-instance objective including the L2 term.
    pub fn loss(&self, x: &FeatureVector, y: ClassLabel) -> f64 {
        let scores = self.scores(x);
        let data_loss = match self.params.loss {
            Loss::Logistic => {
                let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let log_sum = scores.iter().map(|s| (s - max).exp()).sum::<f64>().ln() + max;
                log_sum - scores[y.offset()]
            }
            Loss::Hinge => match self.hinge_violator(&scores, y) {
                Some(j) => 1.0 + scores[j] - scores[y.offset()],
                None => 0.0,
            },
        };
        let reg = 0.5 * self.params.l2 * self.weights.iter().map(|w| w * w).sum::<f64>();
        data_loss + reg
    }

    fn hinge_violator(&self, scores: &[f64], y: ClassLabel) -> Option<usize> {
        let yi = y.offset();
        let (j, best) = scores.iter().enumerate().filter(|(j, _)| *j != yi).fold(
            (usize::MAX, f64::NEG_INFINITY),
            |acc, (j, &s)| if s > acc.1 { (j, s) } else { acc },
        );
        (1.0 + best - scores[yi] > 0.0).then_some(j)
    }

    /// Analytic gradient of [`loss`](Self::loss).
    pub fn gradient(&self, x: &FeatureVector, y: ClassLabel) -> Gradient {
        let scores = self.scores(x);
        let mut coef = vec![0.0; self.num_classes];
        match self.params.loss {
            Loss::Logistic => {
                coef = softmax(&scores);
                coef[y.offset()] -= 1.0;
            }
            Loss::Hinge => {
                if let Some(j) = self.hinge_violator(&scores, y) {
                    coef[j] = 1.0;
                    coef[y.offset()] = -1.0;
                }
            }
        }
        let x = x.values();
        let mut weights = Vec::with_capacity(self.weights.len());
        for (c, row) in self.weights.chunks_exact(self.dim).enumerate() {
            weights.extend(row.iter().zip(x).map(|(w, v)| coef[c] * v + self.params.l2 * w));
        }
        Gradient { weights, biases: coef }
    }

    fn sgd_step(&mut self, x: &FeatureVector, y: ClassLabel) {
        let lr = self.params.learning_rate;
        if lr == 0.0 {
            return;
        }
        let g = self.gradient(x, y);
        self.weights.iter_mut().zip(&g.weights).for_each(|(w, d)| *w -= lr * d);
        self.biases.iter_mut().zip(&g.biases).for_each(|(b, d)| *b -= lr * d);
    }

    /// `passes` gradient steps on one labelled instance.
    pub fn partial_update(&mut self, x: &FeatureVector, y: ClassLabel) {
        assert!(y.index() <= self.num_classes, "label {y} outside model range");
        for _ in 0..self.params.passes {
            self.sgd_step(x, y);
        }
        self.update_count += 1;
    }

    /// Trains on a labelled pool for `warmup_epochs` shuffled epochs.
    pub fn fit_warmup(&mut self, pool: &[(FeatureVector, ClassLabel)]) -> Result<()> {
        let mut classes: Vec<_> = pool.iter().map(|(_, y)| *y).collect();
        classes.sort_unstable();
        classes.dedup();
        if classes.len() < 2 {
            return Err(Error::SingleClassPool);
        }
        if let Some((_, y)) = pool.iter().find(|(_, y)| y.index() > self.num_classes) {
            return Err(Error::invalid("pool", format!("label {y} outside model range")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.params.seed);
        let mut order: Vec<usize> = (0..pool.len()).collect();
        for _ in 0..self.params.warmup_epochs {
            order.shuffle(&mut rng);
            for &i in &order {
                let (x, y) = &pool[i];
                self.sgd_step(x, *y);
            }
        }
        Ok(())
    }
}
