//! Error-aware annotation scheduling for human-in-the-loop stream
//! classification.
//!
//! The crate simulates an active-learning loop over a labelled text stream:
//! a linear model picks instances to annotate, a simulated annotator whose
//! accuracy decays with the time since it last saw each class supplies the
//! labels, and the model is updated online. Three selection policies are
//! provided (random, uncertainty, error-avoidance), along with generators
//! and analyzers for annotation-order experiments with human judges.

pub mod classifier;
pub mod dataset;
pub mod decay;
mod error;
pub mod oracle;
pub mod sampling;
pub mod schedules;
pub mod simulation;

pub use classifier::{EvalReport, FeatureVector, Featurizer, FeaturizerConfig, OnlineClassifier};
pub use dataset::{ClassLabel, ClassSet, DatasetSplits, Schema, SplitOptions, StreamInstance};
pub use decay::{decaying_score, DecayParams, DecayPreset};
pub use error::{Error, Result};
pub use oracle::{AnnotationResult, OracleConfig, OracleState};
pub use sampling::{ErrorMatrix, SamplerPolicy, UncertaintyBand};
