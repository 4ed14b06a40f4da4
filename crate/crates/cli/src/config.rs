//! `key=value` run configuration with dotted section keys.
//!
//! Lines are `key = value`; blank lines and lines starting with `#` are
//! skipped. Command-line flags override file values.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

/// Every accepted key with a one-line description.
pub const KEYS: &[(&str, &str)] = &[
    ("seed", "master seed; split/model/oracle/sampler seeds are seed+0..3"),
    ("output.dir", "output directory"),
    (
        "data.path",
        "input file (.jsonl/.ndjson/.json, .tsv, or delimited text)",
    ),
    (
        "data.min_confidence",
        "keep rows with confidence strictly above this (default 0.65)",
    ),
    ("data.delimiter", "delimiter for delimited files (default ,)"),
    ("data.classes", "comma-separated class names in index order"),
    ("data.id_column", "id column name"),
    ("data.timestamp_column", "timestamp column name"),
    ("data.text_column", "text column name"),
    ("data.label_column", "label column name"),
    ("data.confidence_column", "confidence column name"),
    ("synthetic.preset", "hurricane | uniform"),
    ("synthetic.intervals", "generator intervals (default 25)"),
    ("synthetic.per_interval", "instances per generator interval"),
    ("synthetic.vocab", "tokens per class vocabulary"),
    ("synthetic.tokens", "tokens per instance"),
    ("synthetic.noise", "share of shared-noise tokens"),
    ("synthetic.confusion", "share of tokens borrowed from a confusing class"),
    ("synthetic.seed", "generator seed (default: master seed)"),
    ("split.bin_size", "instances per interval (default 36)"),
    ("split.n_warmup", "warm-up instances per class (default 20)"),
    ("split.test_fraction", "held-out test share (default 0.2)"),
    ("split.stratify", "stratify the test split by class (true/false)"),
    ("split.seed", "split seed override"),
    ("oracle.preset", "slow | fast | none"),
    ("oracle.alpha", "custom decay alpha (needs beta and gamma)"),
    ("oracle.beta", "custom decay beta"),
    ("oracle.gamma", "custom decay gamma"),
    ("oracle.error_target_policy", "most_activated | uniform_other"),
    ("oracle.clock", "assigned | true (which label refreshes a class clock)"),
    ("oracle.seed", "oracle seed override"),
    ("sampler.policy", "random | uncertainty | error_avoidance"),
    ("sampler.band_low", "uncertainty band lower bound (default 0.3)"),
    ("sampler.band_high", "uncertainty band upper bound (default 0.7)"),
    (
        "sampler.discard_after_interval",
        "no class is discarded up to this interval (default 3)",
    ),
    ("sampler.discard_refresh", "per_interval | per_annotation"),
    ("sampler.seed", "sampler seed override"),
    ("classifier.featurizer", "hashed | pretrained"),
    ("classifier.dim", "hashed feature dimension (default 256)"),
    ("classifier.hash_seed", "feature hashing seed"),
    ("classifier.vectors", "word-vector file for the pretrained featurizer"),
    ("classifier.lr", "learning rate (default 0.1)"),
    ("classifier.reg", "L2 penalty (default 1e-4)"),
    ("classifier.passes", "gradient steps per annotation (default 5)"),
    ("classifier.warmup_epochs", "warm-up epochs (default 50)"),
    ("classifier.loss", "logistic | hinge"),
    ("classifier.seed", "model seed override"),
    ("compare.policies", "comma-separated policies to compare"),
    ("compare.decays", "comma-separated decay presets to compare"),
    ("compare.replicates", "consecutive master seeds to run (default 1)"),
    ("schedule.kind", "slip | mistake | lab"),
    ("schedule.permute", "emit all six target orderings (true/false)"),
    ("schedule.max_len", "lab stream length cap (default 800)"),
    ("schedule.gap_min", "lab stream minimum filler gap (default 1)"),
    ("schedule.gap_max", "lab stream maximum filler gap (default 4)"),
    ("analyze.schedules", "comma-separated schedule JSON files"),
    ("analyze.responses", "comma-separated response files, one per schedule"),
    ("analyze.test", "paired_t | z | binomial"),
    (
        "analyze.simulate_judges",
        "simulate this many judges instead of reading responses",
    ),
    (
        "analyze.min_count",
        "minimum observations per gap in the trend test (default 30)",
    ),
];

pub fn is_known(key: &str) -> bool {
    KEYS.iter().any(|(k, _)| *k == key)
}

/// Help text listing all keys.
pub fn keys_help() -> String {
    let width = KEYS.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::from("Config keys (file `key = value`, flags override):\n");
    for (k, d) in KEYS {
        let _ = writeln!(out, "  {k:<width$}  {d}");
    }
    out
}

/// Resolved key/value settings.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", n + 1)))?;
            let key = key.trim();
            if !is_known(key) {
                return Err(CliError::Config(format!("line {}: unknown key `{key}`", n + 1)));
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Settings { values })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        if !path.exists() {
            return Err(CliError::MissingInput(format!("config file {}", path.display())));
        }
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?;
        Settings::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        debug_assert!(is_known(key), "flag mapped to unknown key {key}");
        self.values.insert(key.to_string(), value.to_string());
    }

    /// Applies a flag override when present.
    pub fn set_opt<T: ToString>(&mut self, key: &str, value: Option<T>) {
        if let Some(v) = value {
            self.set(key, v);
        }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| CliError::Config(format!("{key}: invalid value `{v}`: {e}"))),
        }
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn list(&self, key: &str) -> Vec<String> {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn values(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    /// Serializes back to the file format.
    pub fn to_file_text(&self) -> String {
        self.values.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}
