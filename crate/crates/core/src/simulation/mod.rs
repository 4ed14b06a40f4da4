//! The streaming active-learning loop.
//!
//! Per interval the loop picks instances according to the sampler policy,
//! asks the simulated oracle for labels in stream order, updates the model
//! once per label, appends error-matrix rows, and scores the fixed test set.

mod compare;
mod drift;
mod manifest;

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classifier::{argmax, ClassifierParams, EvalReport, FeatureVector, FeaturizerConfig, OnlineClassifier};
use crate::dataset::{
    ingest, prepare_splits, ClassLabel, ClassSet, Schema, SplitOptions, StreamInstance, DEFAULT_MIN_CONFIDENCE,
};
use crate::decay::{DecayParams, DecayPreset};
use crate::error::{Error, Result};
use crate::oracle::{AnnotationResult, ClockKey, ErrorTargetPolicy, OracleConfig, OracleState};
use crate::sampling::{
    sample_random, select_error_avoidance, select_uncertain, ErrorMatrix, SamplerPolicy, UncertaintyBand,
    DEFAULT_DISCARD_AFTER,
};

pub use compare::{compare, Comparison, ComparisonRun};
pub use drift::{generate_drift_stream, DriftSpec};
pub use manifest::{dataset_fingerprint, replay, RunManifest, MANIFEST_FILE, METRICS_FILE};

/// Where the instances come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DataSource {
    File {
        path: PathBuf,
        #[serde(default)]
        schema: Schema,
        #[serde(default = "default_min_confidence")]
        min_confidence: f64,
    },
    Synthetic {
        drift: DriftSpec,
        seed: u64,
    },
}

fn default_min_confidence() -> f64 {
    DEFAULT_MIN_CONFIDENCE
}

impl DataSource {
    pub fn classes(&self) -> Result<ClassSet> {
        match self {
            DataSource::File { schema, .. } => Ok(schema.classes.clone()),
            DataSource::Synthetic { drift, .. } if drift.num_classes == 4 => Ok(ClassSet::crisis()),
            DataSource::Synthetic { drift, .. } => ClassSet::new((1..=drift.num_classes).map(|c| format!("c{c}"))),
        }
    }

    pub fn load(&self) -> Result<Vec<StreamInstance>> {
        match self {
            DataSource::File {
                path,
                schema,
                min_confidence,
            } => ingest(path, *min_confidence, schema),
            DataSource::Synthetic { drift, seed } => generate_drift_stream(drift, *seed),
        }
    }
}

/// Decay parameters, either a named preset or explicit values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DecaySetting {
    Preset(DecayPreset),
    Custom(DecayParams),
}

impl DecaySetting {
    pub fn params(&self) -> DecayParams {
        match self {
            DecaySetting::Preset(p) => p.params(),
            DecaySetting::Custom(p) => *p,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DecaySetting::Preset(p) => p.name(),
            DecaySetting::Custom(_) => "custom",
        }
    }
}

impl From<DecayPreset> for DecaySetting {
    fn from(p: DecayPreset) -> Self {
        DecaySetting::Preset(p)
    }
}

/// When the discarded class is recomputed under error-avoidance sampling.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscardRefresh {
    #[default]
    PerInterval,
    PerAnnotation,
}

impl std::str::FromStr for DiscardRefresh {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "per_interval" | "interval" => Ok(DiscardRefresh::PerInterval),
            "per_annotation" | "annotation" => Ok(DiscardRefresh::PerAnnotation),
            other => Err(Error::invalid(
                "sampler.discard_refresh",
                format!("unknown value `{other}`"),
            )),
        }
    }
}

/// The four seeds of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub split: u64,
    pub model: u64,
    pub oracle: u64,
    pub sampler: u64,
}

impl Seeds {
    /// split, model, oracle and sampler seeds at offsets 0 to 3.
    pub fn from_master(master: u64) -> Self {
        Seeds {
            split: master,
            model: master.wrapping_add(1),
            oracle: master.wrapping_add(2),
            sampler: master.wrapping_add(3),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub data: DataSource,
    pub bin_size: usize,
    pub n_warmup: usize,
    pub test_fraction: f64,
    #[serde(default)]
    pub stratify_test: bool,
    pub decay: DecaySetting,
    #[serde(default)]
    pub error_target_policy: ErrorTargetPolicy,
    #[serde(default)]
    pub clock: ClockKey,
    pub policy: SamplerPolicy,
    #[serde(default)]
    pub band: UncertaintyBand,
    pub discard_after: usize,
    #[serde(default)]
    pub discard_refresh: DiscardRefresh,
    /// The `seed` field is replaced by `seeds.model` at run time.
    pub classifier: ClassifierParams,
    #[serde(default)]
    pub featurizer: FeaturizerConfig,
    pub seeds: Seeds,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

impl SimulationConfig {
    /// Defaults around a data source: bins of 36, 20 warm-up items per
    /// class, a 20% test set, no decay, uncertainty sampling.
    pub fn new(data: DataSource, master_seed: u64) -> Self {
        let seeds = Seeds::from_master(master_seed);
        SimulationConfig {
            data,
            bin_size: 36,
            n_warmup: 20,
            test_fraction: crate::dataset::DEFAULT_TEST_FRACTION,
            stratify_test: false,
            decay: DecayPreset::None.into(),
            error_target_policy: ErrorTargetPolicy::default(),
            clock: ClockKey::default(),
            policy: SamplerPolicy::Uncertainty,
            band: UncertaintyBand::default(),
            discard_after: DEFAULT_DISCARD_AFTER,
            discard_refresh: DiscardRefresh::default(),
            classifier: ClassifierParams {
                seed: seeds.model,
                ..ClassifierParams::default()
            },
            featurizer: FeaturizerConfig::default(),
            seeds,
            out_dir: None,
        }
    }

    /// The hurricane-style synthetic stream, generated from the master seed.
    pub fn synthetic(intervals: usize, master_seed: u64) -> Self {
        SimulationConfig::new(
            DataSource::Synthetic {
                drift: DriftSpec::hurricane(intervals),
                seed: master_seed,
            },
            master_seed,
        )
    }

    pub fn with_master_seed(mut self, master: u64) -> Self {
        self.seeds = Seeds::from_master(master);
        self.classifier.seed = self.seeds.model;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.bin_size == 0 {
            return Err(Error::invalid("split.bin_size", "must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.test_fraction) {
            return Err(Error::invalid("split.test_fraction", "must lie in [0, 1)"));
        }
        self.decay.params().validate()?;
        self.band.validate()?;
        self.classifier.validate()?;
        if let DataSource::Synthetic { drift, .. } = &self.data {
            drift.validate()?;
        }
        Ok(())
    }
}

/// One interval of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalMetrics {
    /// One-based.
    pub interval_index: usize,
    pub n_arrived: usize,
    pub n_selected: usize,
    pub n_annotated: usize,
    pub n_oracle_errors: usize,
    pub discarded_class: Option<ClassLabel>,
    pub eval: EvalReport,
}

/// One oracle call, with the interval it happened in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub interval: usize,
    /// Model prediction just before the update.
    pub predicted: ClassLabel,
    #[serde(flatten)]
    pub result: AnnotationResult,
}

/// Test-set probabilities after one interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestScores {
    pub interval: usize,
    pub probas: Vec<Vec<f64>>,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub manifest: RunManifest,
    pub intervals: Vec<IntervalMetrics>,
    pub annotations: Vec<AnnotationRecord>,
    pub test_ids: Vec<String>,
    pub test_truth: Vec<ClassLabel>,
    pub test_scores: Vec<TestScores>,
    /// Error-matrix window at the end of the run.
    pub matrix: ErrorMatrix,
    /// Ids of every instance the model was trained on, warm-up included.
    pub trained_ids: Vec<String>,
    pub classes: ClassSet,
}

impl RunOutput {
    pub fn final_macro_auc(&self) -> f64 {
        self.intervals.last().map_or(f64::NAN, |m| m.eval.macro_auc)
    }

    pub fn mean_macro_auc(&self) -> f64 {
        self.intervals.iter().map(|m| m.eval.macro_auc).sum::<f64>() / self.intervals.len() as f64
    }

    /// Ids annotated in each interval, in annotation order.
    pub fn selections(&self) -> Vec<Vec<String>> {
        let mut out = vec![Vec::new(); self.intervals.len()];
        for a in &self.annotations {
            out[a.interval - 1].push(a.result.instance_id.clone());
        }
        out
    }
}

/// Runs a full simulation.
pub fn run(config: &SimulationConfig) -> Result<RunOutput> {
    config.validate()?;
    let started_at = chrono::Utc::now();
    let classes = config.data.classes()?;
    let k = classes.len();
    let data = config.data.load()?;
    let fingerprint = dataset_fingerprint(&data);

    let splits = prepare_splits(
        &data,
        &classes,
        &SplitOptions {
            test_fraction: config.test_fraction,
            n_warmup: config.n_warmup,
            bin_size: config.bin_size,
            stratify: config.stratify_test,
            seed: config.seeds.split,
        },
    )?;
    if splits.stream.is_empty() {
        return Err(Error::EmptyStream);
    }

    let featurizer = config.featurizer.build()?;
    let params = ClassifierParams {
        seed: config.seeds.model,
        ..config.classifier.clone()
    };
    let mut model = OnlineClassifier::new(k, featurizer.dim(), params)?;
    let warmup: Vec<(FeatureVector, ClassLabel)> = splits
        .warmup
        .iter()
        .map(|i| (featurizer.featurize(&i.text), i.true_class))
        .collect();
    model.fit_warmup(&warmup)?;
    let mut trained_ids: Vec<String> = splits.warmup.iter().map(|i| i.id.clone()).collect();

    let mut oracle = OracleState::new(
        OracleConfig {
            params: config.decay.params(),
            error_target_policy: config.error_target_policy,
            clock: config.clock,
            seed: config.seeds.oracle,
        },
        k,
    )?;
    let mut sampler_rng = ChaCha8Rng::seed_from_u64(config.seeds.sampler);
    let mut matrix = ErrorMatrix::new(k);

    let test_features: Vec<FeatureVector> = splits.test.iter().map(|i| featurizer.featurize(&i.text)).collect();
    let test_truth: Vec<ClassLabel> = splits.test.iter().map(|i| i.true_class).collect();

    let mut intervals = Vec::with_capacity(splits.n_bins());
    let mut annotations = Vec::new();
    let mut test_scores = Vec::with_capacity(splits.n_bins());

    for (b, bin) in splits.bins().enumerate() {
        let interval = b + 1;
        matrix.advance_interval(interval);
        let features: Vec<FeatureVector> = bin.iter().map(|i| featurizer.featurize(&i.text)).collect();
        let probas: Vec<Vec<f64>> = features.iter().map(|x| model.predict_proba(x)).collect();

        let discarded = match config.policy {
            SamplerPolicy::ErrorAvoidance => matrix.discarded_class(interval, config.discard_after),
            _ => None,
        };
        let mut selected = match config.policy {
            SamplerPolicy::Uncertainty => select_uncertain(&probas, &config.band),
            SamplerPolicy::ErrorAvoidance => match config.discard_refresh {
                DiscardRefresh::PerInterval => select_error_avoidance(&probas, &config.band, discarded),
                // filtered one annotation at a time below
                DiscardRefresh::PerAnnotation => select_uncertain(&probas, &config.band),
            },
            SamplerPolicy::Random => {
                let budget = select_uncertain(&probas, &config.band).len();
                sample_random(bin.len(), budget, &mut sampler_rng)
            }
        };
        selected.sort_unstable();

        let mut n_annotated = 0;
        let mut n_errors = 0;
        for idx in selected.iter().copied() {
            let x = &features[idx];
            let predicted = ClassLabel::from_offset(argmax(&model.predict_proba(x)));
            if config.policy == SamplerPolicy::ErrorAvoidance
                && config.discard_refresh == DiscardRefresh::PerAnnotation
                && matrix.discarded_class(interval, config.discard_after) == Some(predicted)
            {
                continue;
            }
            let instance = &bin[idx];
            let result = oracle.annotate(instance);
            model.partial_update(x, result.assigned_label);
            matrix.update(
                &instance.id,
                instance.arrival_time,
                x.clone(),
                result.assigned_label,
                &model,
                interval,
            );
            trained_ids.push(instance.id.clone());
            n_annotated += 1;
            n_errors += usize::from(result.was_error);
            annotations.push(AnnotationRecord {
                interval,
                predicted,
                result,
            });
        }

        let probas: Vec<Vec<f64>> = test_features.iter().map(|x| model.predict_proba(x)).collect();
        let eval = EvalReport::from_scores(&test_truth, &probas, k)?;
        intervals.push(IntervalMetrics {
            interval_index: interval,
            n_arrived: bin.len(),
            n_selected: n_annotated,
            n_annotated,
            n_oracle_errors: n_errors,
            discarded_class: discarded,
            eval,
        });
        test_scores.push(TestScores { interval, probas });
    }

    let manifest = RunManifest::new(config, fingerprint, started_at, chrono::Utc::now(), intervals.len());
    Ok(RunOutput {
        manifest,
        intervals,
        annotations,
        test_ids: splits.test.iter().map(|i| i.id.clone()).collect(),
        test_truth,
        test_scores,
        matrix,
        trained_ids,
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn small(policy: SamplerPolicy, decay: DecayPreset, seed: u64) -> SimulationConfig {
        let mut cfg = SimulationConfig::synthetic(12, seed);
        cfg.policy = policy;
        cfg.decay = decay.into();
        cfg.classifier.warmup_epochs = 20;
        cfg
    }

    #[test]
    fn runs_are_deterministic() {
        let cfg = small(SamplerPolicy::ErrorAvoidance, DecayPreset::Fast, 5);
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert_eq!(a.intervals, b.intervals);
        assert_eq!(a.annotations, b.annotations);
        assert_eq!(a.test_scores, b.test_scores);
    }

    #[test]
    fn interval_bookkeeping() {
        let out = run(&small(SamplerPolicy::Random, DecayPreset::Slow, 2)).unwrap();
        let total: usize = out.intervals.iter().map(|m| m.n_annotated).sum();
        assert_eq!(total, out.annotations.len());
        assert_eq!(total as u64, out.matrix.events());
        for m in &out.intervals {
            assert_eq!(m.n_selected, m.n_annotated);
            assert!(m.n_oracle_errors <= m.n_annotated);
            let logged = out
                .annotations
                .iter()
                .filter(|a| a.interval == m.interval_index && a.result.was_error)
                .count();
            assert_eq!(logged, m.n_oracle_errors);
        }
    }

    #[test]
    fn test_set_never_trained_on() {
        let out = run(&small(SamplerPolicy::Uncertainty, DecayPreset::Fast, 4)).unwrap();
        let test: HashSet<_> = out.test_ids.iter().collect();
        assert!(out.trained_ids.iter().all(|id| !test.contains(id)));
    }

    #[test]
    fn random_budget_matches_uncertainty_per_interval() {
        // both policies see the same first interval through the same warm-up model
        let r = run(&small(SamplerPolicy::Random, DecayPreset::None, 9)).unwrap();
        let u = run(&small(SamplerPolicy::Uncertainty, DecayPreset::None, 9)).unwrap();
        assert_eq!(r.intervals[0].n_selected, u.intervals[0].n_selected);
    }

    #[test]
    fn error_free_oracle_makes_no_errors() {
        let out = run(&small(SamplerPolicy::ErrorAvoidance, DecayPreset::None, 3)).unwrap();
        assert!(out.annotations.iter().all(|a| !a.result.was_error));
    }

    #[test]
    fn nothing_discarded_early() {
        let out = run(&small(SamplerPolicy::ErrorAvoidance, DecayPreset::Fast, 1)).unwrap();
        assert!(out.intervals[..3].iter().all(|m| m.discarded_class.is_none()));
        let u = run(&small(SamplerPolicy::Uncertainty, DecayPreset::Fast, 1)).unwrap();
        assert_eq!(out.selections()[..3], u.selections()[..3]);
    }

    #[test]
    fn per_annotation_refresh_runs() {
        let mut cfg = small(SamplerPolicy::ErrorAvoidance, DecayPreset::Fast, 6);
        cfg.discard_refresh = DiscardRefresh::PerAnnotation;
        let out = run(&cfg).unwrap();
        assert_eq!(out.annotations.len() as u64, out.matrix.events());
    }

    #[test]
    fn separable_stream_is_learned() {
        let mut cfg = small(SamplerPolicy::Uncertainty, DecayPreset::None, 11);
        if let DataSource::Synthetic { drift, .. } = &mut cfg.data {
            drift.noise_rate = 0.0;
            drift.confusion_rate = 0.0;
        }
        let out = run(&cfg).unwrap();
        assert!(out.final_macro_auc() >= 0.95, "{}", out.final_macro_auc());
    }

    #[test]
    fn invalid_config_rejected() {
        let mut cfg = small(SamplerPolicy::Random, DecayPreset::None, 0);
        cfg.bin_size = 0;
        assert!(matches!(
            run(&cfg),
            Err(Error::InvalidParameter {
                name: "split.bin_size",
                ..
            })
        ));
    }

    #[test]
    fn config_serde_round_trip() {
        let mut cfg = small(SamplerPolicy::ErrorAvoidance, DecayPreset::Slow, 0);
        cfg.decay = DecaySetting::Custom(DecayParams {
            alpha: 0.1,
            beta: 0.5,
            gamma: 0.4,
        });
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<SimulationConfig>(&json).unwrap(), cfg);
    }
}
