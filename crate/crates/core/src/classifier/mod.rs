//! Featurization, the online linear model and evaluation metrics.

mod features;
mod metrics;
mod model;

pub use features::{featurize_hashed, featurize_pretrained, FeatureVector, Featurizer, FeaturizerConfig, WordVectors};
pub use metrics::{evaluate, per_class_f1, predict_all, roc_auc, EvalReport};
pub use model::{argmax, softmax, ClassifierParams, Gradient, Loss, OnlineClassifier};
