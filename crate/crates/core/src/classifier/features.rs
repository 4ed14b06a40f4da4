//! Text featurizers: seeded feature hashing and averaged word vectors.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense feature vector of fixed dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn zeros(dim: usize) -> Self {
        FeatureVector(vec![0.0; dim])
    }

    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("features", "entries must be finite"));
        }
        Ok(FeatureVector(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

fn tokens(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split_whitespace().map(str::to_lowercase)
}

// FNV-1a, seeded by hashing the seed bytes first.
fn fnv1a(seed: u64, bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    for b in seed.to_le_bytes().iter().chain(bytes) {
        h ^= u64::from(*b);
        h = h.wrapping_mul(PRIME);
    }
    h
}

// splitmix64 finalizer, decorrelates the sign bit from the bucket.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Signed feature hashing of lowercased whitespace tokens, L2-normalised.
pub fn featurize_hashed(text: &str, dim: usize, seed: u64) -> FeatureVector {
    assert!(dim >= 1, "feature dimension must be positive");
    let mut values = vec![0.0; dim];
    for token in tokens(text) {
        let h = fnv1a(seed, token.as_bytes());
        let bucket = (h % dim as u64) as usize;
        let sign = if mix(h) >> 63 == 0 { 1.0 } else { -1.0 };
        values[bucket] += sign;
    }
    let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        values.iter_mut().for_each(|v| *v /= norm);
    }
    FeatureVector(values)
}

/// Word-vector table loaded from a whitespace-separated text file, one word
/// followed by its components per line.
#[derive(Clone, Debug, PartialEq)]
pub struct WordVectors {
    dim: usize,
    table: HashMap<String, Vec<f64>>,
}

impl WordVectors {
    pub fn from_map(table: HashMap<String, Vec<f64>>) -> Result<Self> {
        let dim = table
            .values()
            .next()
            .map(Vec::len)
            .ok_or_else(|| Error::invalid("word vectors", "table is empty"))?;
        if dim == 0 || table.values().any(|v| v.len() != dim) {
            return Err(Error::invalid(
                "word vectors",
                "all vectors must share one non-zero dimension",
            ));
        }
        Ok(WordVectors { dim, table })
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingInput(path.to_path_buf()));
        }
        let file = File::open(path).map_err(|e| Error::io(path.display(), e))?;
        let mut table = HashMap::new();
        let mut dim = None;
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line_no = i as u64 + 1;
            let line = line.map_err(|e| Error::io(path.display(), e))?;
            let mut parts = line.split_whitespace();
            let Some(word) = parts.next() else { continue };
            let vector = parts
                .map(str::parse::<f64>)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::MalformedRow {
                    path: path.display().to_string(),
                    line: line_no,
                    message: format!("bad vector component: {e}"),
                })?;
            let expected = *dim.get_or_insert(vector.len());
            if vector.len() != expected || expected == 0 {
                return Err(Error::DimensionMismatch {
                    path: path.display().to_string(),
                    line: line_no,
                    expected,
                    found: vector.len(),
                });
            }
            table.insert(word.to_lowercase(), vector);
        }
        WordVectors::from_map(table)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.table.get(word).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

/// Mean of the in-vocabulary token vectors; zero when none are known.
pub fn featurize_pretrained(text: &str, table: &WordVectors) -> FeatureVector {
    let mut values = vec![0.0; table.dim];
    let mut hits = 0usize;
    for token in tokens(text) {
        if let Some(v) = table.get(&token) {
            values.iter_mut().zip(v).for_each(|(acc, x)| *acc += x);
            hits += 1;
        }
    }
    if hits > 0 {
        values.iter_mut().for_each(|v| *v /= hits as f64);
    }
    FeatureVector(values)
}

/// Serializable featurizer choice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeaturizerConfig {
    Hashed { dim: usize, seed: u64 },
    Pretrained { path: PathBuf },
}

impl Default for FeaturizerConfig {
    fn default() -> Self {
        FeaturizerConfig::Hashed { dim: 256, seed: 0 }
    }
}

impl FeaturizerConfig {
    pub fn build(&self) -> Result<Featurizer> {
        match self {
            FeaturizerConfig::Hashed { dim, seed } => {
                if *dim == 0 {
                    return Err(Error::invalid("classifier.dim", "must be at least 1"));
                }
                Ok(Featurizer::Hashed { dim: *dim, seed: *seed })
            }
            FeaturizerConfig::Pretrained { path } => Ok(Featurizer::Pretrained(Arc::new(WordVectors::load(path)?))),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Featurizer {
    Hashed { dim: usize, seed: u64 },
    Pretrained(Arc<WordVectors>),
}

impl Featurizer {
    pub fn dim(&self) -> usize {
        match self {
            Featurizer::Hashed { dim, .. } => *dim,
            Featurizer::Pretrained(t) => t.dim(),
        }
    }

    pub fn featurize(&self, text: &str) -> FeatureVector {
        match self {
            Featurizer::Hashed { dim, seed } => featurize_hashed(text, *dim, *seed),
            Featurizer::Pretrained(t) => featurize_pretrained(text, t),
        }
    }
}
