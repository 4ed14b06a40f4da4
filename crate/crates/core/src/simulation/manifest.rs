use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{run, RunOutput, Seeds, SimulationConfig};
use crate::dataset::StreamInstance;
use crate::error::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const METRICS_FILE: &str = "metrics.csv";
pub const ANNOTATIONS_FILE: &str = "annotations.jsonl";
pub const TEST_SCORES_FILE: &str = "test_scores.csv";
pub const ERROR_MATRIX_FILE: &str = "error_matrix.jsonl";

/// Everything needed to rerun a simulation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub code_version: String,
    /// SHA-256 of the JSON-serialized config.
    pub config_hash: String,
    pub dataset_fingerprint: String,
    pub seeds: Seeds,
    pub started_at: String,
    pub finished_at: String,
    pub n_intervals: usize,
    pub config: SimulationConfig,
}

impl RunManifest {
    pub fn new(
        config: &SimulationConfig,
        dataset_fingerprint: String,
        started_at: DateTime<Utc>,
        finished_at: DateTime<Utc>,
        n_intervals: usize,
    ) -> Self {
        RunManifest {
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash: config_hash(config),
            dataset_fingerprint,
            seeds: config.seeds,
            started_at: started_at.to_rfc3339_opts(SecondsFormat::Millis, true),
            finished_at: finished_at.to_rfc3339_opts(SecondsFormat::Millis, true),
            n_intervals,
            config: config.clone(),
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingInput(path.to_path_buf()));
        }
        let raw = fs::read_to_string(path).map_err(|e| Error::io(path.display(), e))?;
        Ok(serde_json::from_str(&raw)?)
    }
}

pub fn config_hash(config: &SimulationConfig) -> String {
    let bytes = serde_json::to_vec(config).expect("config serializes");
    hex::encode(Sha256::digest(bytes))
}

/// SHA-256 over the instances in input order.
pub fn dataset_fingerprint(data: &[StreamInstance]) -> String {
    let mut hasher = Sha256::new();
    for inst in data {
        hasher.update(serde_json::to_vec(inst).expect("instance serializes"));
        hasher.update(b"\n");
    }
    hex::encode(hasher.finalize())
}

/// Reruns the config embedded in a manifest and checks that the config and
/// the data are unchanged.
pub fn replay(manifest: &RunManifest) -> Result<RunOutput> {
    if config_hash(&manifest.config) != manifest.config_hash {
        return Err(Error::invalid("manifest", "embedded config does not match its hash"));
    }
    let out = run(&manifest.config)?;
    if out.manifest.dataset_fingerprint != manifest.dataset_fingerprint {
        return Err(Error::invalid("manifest", "dataset has changed since the recorded run"));
    }
    Ok(out)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path.display(), e))
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

impl RunOutput {
    /// Writes the manifest, then the metrics, annotation log, test-set
    /// scores and final error-matrix window.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir.display(), e))?;

        let path = dir.join(MANIFEST_FILE);
        let mut w = create(&path)?;
        serde_json::to_writer_pretty(&mut w, &self.manifest)?;
        writeln!(w)
            .and_then(|_| w.flush())
            .map_err(|e| Error::io(path.display(), e))?;

        self.write_metrics(&dir.join(METRICS_FILE))?;

        let path = dir.join(ANNOTATIONS_FILE);
        let mut w = create(&path)?;
        for a in &self.annotations {
            serde_json::to_writer(&mut w, a)?;
            writeln!(w).map_err(|e| Error::io(path.display(), e))?;
        }
        w.flush().map_err(|e| Error::io(path.display(), e))?;

        let path = dir.join(TEST_SCORES_FILE);
        let mut w = csv::Writer::from_writer(create(&path)?);
        let mut header = vec!["interval".to_string(), "id".into(), "true_class".into()];
        header.extend(self.classes.labels().map(|c| format!("p_{c}")));
        w.write_record(&header)?;
        for scores in &self.test_scores {
            for ((id, truth), probas) in self.test_ids.iter().zip(&self.test_truth).zip(&scores.probas) {
                let mut rec = vec![scores.interval.to_string(), id.clone(), truth.to_string()];
                rec.extend(probas.iter().map(f64::to_string));
                w.write_record(&rec)?;
            }
        }
        w.flush().map_err(|e| Error::io(path.display(), e))?;

        let path = dir.join(ERROR_MATRIX_FILE);
        let mut w = create(&path)?;
        self.matrix
            .write_json_lines(&mut w)
            .map_err(|e| Error::io(path.display(), e))?;
        w.flush().map_err(|e| Error::io(path.display(), e))
    }

    pub fn write_metrics(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_writer(create(path)?);
        let labels: Vec<_> = self.classes.labels().collect();
        let mut header: Vec<String> = [
            "interval",
            "n_arrived",
            "n_selected",
            "n_annotated",
            "n_oracle_errors",
            "discarded_class",
            "accuracy",
            "macro_auc",
            "macro_f1",
        ]
        .map(String::from)
        .to_vec();
        header.extend(labels.iter().map(|c| format!("auc_{c}")));
        header.extend(labels.iter().map(|c| format!("f1_{c}")));
        w.write_record(&header)?;
        for m in &self.intervals {
            let mut rec = vec![
                m.interval_index.to_string(),
                m.n_arrived.to_string(),
                m.n_selected.to_string(),
                m.n_annotated.to_string(),
                m.n_oracle_errors.to_string(),
                opt(m.discarded_class),
                m.eval.accuracy.to_string(),
                m.eval.macro_auc.to_string(),
                m.eval.macro_f1.to_string(),
            ];
            rec.extend(labels.iter().map(|c| opt(m.eval.per_class_auc.get(c))));
            rec.extend(labels.iter().map(|c| opt(m.eval.per_class_f1.get(c))));
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io(path.display(), e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decay::DecayPreset;
    use crate::sampling::SamplerPolicy;

    fn cfg() -> SimulationConfig {
        let mut cfg = SimulationConfig::synthetic(8, 21);
        cfg.policy = SamplerPolicy::ErrorAvoidance;
        cfg.decay = DecayPreset::Fast.into();
        cfg.classifier.warmup_epochs = 10;
        cfg
    }

    #[test]
    fn replay_reproduces_files() {
        let dir = tempfile::tempdir().unwrap();
        let out = run(&cfg()).unwrap();
        out.write(&dir.path().join("a")).unwrap();
        let manifest = RunManifest::read(&dir.path().join("a").join(MANIFEST_FILE)).unwrap();
        replay(&manifest).unwrap().write(&dir.path().join("b")).unwrap();
        for f in [METRICS_FILE, ANNOTATIONS_FILE, TEST_SCORES_FILE, ERROR_MATRIX_FILE] {
            let a = fs::read(dir.path().join("a").join(f)).unwrap();
            let b = fs::read(dir.path().join("b").join(f)).unwrap();
            assert_eq!(a, b, "{f} differs");
        }
    }

    #[test]
    fn tampered_manifest_rejected() {
        let mut m = run(&cfg()).unwrap().manifest;
        m.config.bin_size = 10;
        assert!(replay(&m).is_err());
    }

    #[test]
    fn metrics_header_and_rows() {
        let dir = tempfile::tempdir().unwrap();
        let out = run(&cfg()).unwrap();
        out.write_metrics(&dir.path().join(METRICS_FILE)).unwrap();
        let text = fs::read_to_string(dir.path().join(METRICS_FILE)).unwrap();
        let mut lines = text.lines();
        assert!(lines
            .next()
            .unwrap()
            .starts_with("interval,n_arrived,n_selected,n_annotated,n_oracle_errors,discarded_class"));
        assert_eq!(lines.count(), out.intervals.len());
    }

    #[test]
    fn fingerprint_tracks_content() {
        let mut data = vec![StreamInstance::new("a", 0.0, "x", crate::dataset::ClassLabel::new(1))];
        let before = dataset_fingerprint(&data);
        data[0].text.push('y');
        assert_ne!(before, dataset_fingerprint(&data));
    }
}
