//! One-vs-rest ROC AUC, accuracy and per-class F1.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::features::Featurizer;
use super::model::{argmax, OnlineClassifier};
use crate::dataset::{ClassLabel, StreamInstance};
use crate::error::{Error, Result};

/// Rank-based (Mann-Whitney) AUC with midranks for ties. `None` when either
/// the positive or the negative set is empty.
pub fn roc_auc(scores: &[f64], positive: &[bool]) -> Option<f64> {
    assert_eq!(scores.len(), positive.len());
    let n_pos = positive.iter().filter(|p| **p).count();
    let n_neg = positive.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // ranks i+1 ..= j+1 share their mean
        let mid = (i + j + 2) as f64 / 2.0;
        rank_sum_pos += mid * order[i..=j].iter().filter(|&&k| positive[k]).count() as f64;
        i = j + 1;
    }
    let u = rank_sum_pos - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Some(u / (n_pos as f64 * n_neg as f64))
}

/// Per-class F1 treating `truth` as reference. Entry `c` is `None` when class
/// `c` never occurs in `truth`.
pub fn per_class_f1(truth: &[ClassLabel], predicted: &[ClassLabel], num_classes: usize) -> Vec<Option<f64>> {
    assert_eq!(truth.len(), predicted.len());
    let mut tp = vec![0usize; num_classes];
    let mut fp = vec![0usize; num_classes];
    let mut fn_ = vec![0usize; num_classes];
    for (t, p) in truth.iter().zip(predicted) {
        if t == p {
            tp[t.offset()] += 1;
        } else {
            fp[p.offset()] += 1;
            fn_[t.offset()] += 1;
        }
    }
    (0..num_classes)
        .map(|c| {
            let support = tp[c] + fn_[c];
            (support > 0).then(|| 2.0 * tp[c] as f64 / (2 * tp[c] + fp[c] + fn_[c]) as f64)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// Only classes present in the evaluation set.
    pub per_class_auc: BTreeMap<ClassLabel, f64>,
    pub macro_auc: f64,
    pub accuracy: f64,
    pub per_class_f1: BTreeMap<ClassLabel, f64>,
    pub macro_f1: f64,
}

impl EvalReport {
    /// Builds a report from class-probability rows.
    pub fn from_scores(truth: &[ClassLabel], probas: &[Vec<f64>], num_classes: usize) -> Result<Self> {
        if truth.is_empty() {
            return Err(Error::Evaluation("evaluation set is empty".into()));
        }
        if truth.len() != probas.len() {
            return Err(Error::Evaluation("score rows do not match labels".into()));
        }
        let mut per_class_auc = BTreeMap::new();
        for c in 0..num_classes {
            let label = ClassLabel::from_offset(c);
            let scores: Vec<f64> = probas.iter().map(|p| p[c]).collect();
            let positive: Vec<bool> = truth.iter().map(|t| *t == label).collect();
            match roc_auc(&scores, &positive) {
                Some(auc) => {
                    per_class_auc.insert(label, auc);
                }
                None => log::warn!("class {label} has no positive or no negative instances; AUC excluded"),
            }
        }
        if per_class_auc.is_empty() {
            return Err(Error::Evaluation("at least two classes must be present".into()));
        }
        let predicted: Vec<ClassLabel> = probas.iter().map(|p| ClassLabel::from_offset(argmax(p))).collect();
        let correct = truth.iter().zip(&predicted).filter(|(t, p)| t == p).count();
        let per_class_f1: BTreeMap<_, _> = per_class_f1(truth, &predicted, num_classes)
            .into_iter()
            .enumerate()
            .filter_map(|(c, f)| f.map(|f| (ClassLabel::from_offset(c), f)))
            .collect();

        Ok(EvalReport {
            macro_auc: mean(per_class_auc.values()),
            accuracy: correct as f64 / truth.len() as f64,
            macro_f1: mean(per_class_f1.values()),
            per_class_auc,
            per_class_f1,
        })
    }
}

fn mean<'a>(values: impl ExactSizeIterator<Item = &'a f64>) -> f64 {
    let n = values.len();
    values.sum::<f64>() / n as f64
}

/// Probability rows for a list of instances.
pub fn predict_all(model: &OnlineClassifier, instances: &[StreamInstance], featurizer: &Featurizer) -> Vec<Vec<f64>> {
    instances
        .iter()
        .map(|i| model.predict_proba(&featurizer.featurize(&i.text)))
        .collect()
}

pub fn evaluate(model: &OnlineClassifier, test: &[StreamInstance], featurizer: &Featurizer) -> Result<EvalReport> {
    let probas = predict_all(model, test, featurizer);
    let truth: Vec<ClassLabel> = test.iter().map(|i| i.true_class).collect();
    EvalReport::from_scores(&truth, &probas, model.num_classes())
}
