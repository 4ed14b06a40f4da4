//! Domain types, ingestion with confidence filtering, and dataset splitting.
//!
//! Two input layouts are accepted:
//!
//! * JSON lines (`.jsonl`, `.ndjson`, `.json`): one object per line with
//!   `id`, `timestamp`, `text`, `label` and an optional `confidence`.
//! * Delimiter-separated text with a header row naming the same fields
//!   (comma by default, tab for `.tsv`).
//!
//! Column names are configurable through [`Schema`].

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Confidence threshold used for the crowd-labelled crisis corpora.
pub const DEFAULT_MIN_CONFIDENCE: f64 = 0.65;

/// Fraction of the dataset held out as the fixed test set.
pub const DEFAULT_TEST_FRACTION: f64 = 0.2;

/// One-based class index. `c1` is `ClassLabel::new(1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassLabel(u16);

impl ClassLabel {
    /// Panics if `index` is zero.
    pub fn new(index: usize) -> Self {
        assert!(index >= 1, "class indices start at 1");
        ClassLabel(u16::try_from(index).expect("class index out of range"))
    }

    pub const fn new_const(index: u16) -> Self {
        assert!(index >= 1, "class indices start at 1");
        ClassLabel(index)
    }

    pub fn from_offset(offset: usize) -> Self {
        ClassLabel::new(offset + 1)
    }

    /// One-based index.
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Zero-based position, for indexing per-class arrays.
    pub fn offset(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// The ordered set of class names for a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSet {
    names: Vec<String>,
}

impl ClassSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() < 2 {
            return Err(Error::invalid("classes", "at least two classes are required"));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if name.trim().is_empty() {
                return Err(Error::invalid("classes", "class names must be non-empty"));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::invalid("classes", format!("duplicate class name `{name}`")));
            }
        }
        Ok(ClassSet { names })
    }

    /// The four humanitarian categories of the crisis tweet corpora.
    pub fn crisis() -> Self {
        ClassSet {
            names: vec![
                "infrastructure_and_utility_damage".into(),
                "rescue_volunteering_donation".into(),
                "affected_individuals".into(),
                "not_relevant_or_cant_judge".into(),
            ],
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = ClassLabel> + '_ {
        (1..=self.names.len()).map(ClassLabel::new)
    }

    pub fn contains(&self, label: ClassLabel) -> bool {
        label.index() <= self.names.len()
    }

    pub fn name(&self, label: ClassLabel) -> &str {
        &self.names[label.offset()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Accepts the full class name or the short `cN` code, case-insensitively.
    pub fn parse(&self, raw: &str) -> Option<ClassLabel> {
        let raw = raw.trim();
        if let Some(pos) = self.names.iter().position(|n| n.eq_ignore_ascii_case(raw)) {
            return Some(ClassLabel::from_offset(pos));
        }
        let digits = raw.strip_prefix('c').or_else(|| raw.strip_prefix('C'))?;
        let index: usize = digits.parse().ok()?;
        (1..=self.names.len()).contains(&index).then(|| ClassLabel::new(index))
    }
}

impl Default for ClassSet {
    fn default() -> Self {
        ClassSet::crisis()
    }
}

/// One labelled text item from a stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StreamInstance {
    pub id: String,
    /// Seconds, or an ordinal step for synthetic streams.
    pub arrival_time: f64,
    pub text: String,
    pub true_class: ClassLabel,
    /// Annotator-agreement confidence in `[0, 1]`.
    #[serde(default = "full_confidence")]
    pub confidence: f64,
}

fn full_confidence() -> f64 {
    1.0
}

impl StreamInstance {
    pub fn new(id: impl Into<String>, arrival_time: f64, text: impl Into<String>, class: ClassLabel) -> Self {
        StreamInstance {
            id: id.into(),
            arrival_time,
            text: text.into(),
            true_class: class,
            confidence: 1.0,
        }
    }
}

/// Column mapping for input files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schema {
    pub id: String,
    pub timestamp: String,
    pub text: String,
    pub label: String,
    pub confidence: String,
    /// Delimiter for delimited files. `.tsv` files always use tab.
    pub delimiter: char,
    pub classes: ClassSet,
}

impl Default for Schema {
    fn default() -> Self {
        Schema {
            id: "id".into(),
            timestamp: "timestamp".into(),
            text: "text".into(),
            label: "label".into(),
            confidence: "confidence".into(),
            delimiter: ',',
            classes: ClassSet::crisis(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    JsonLines,
    Delimited(u8),
}

impl InputFormat {
    pub fn detect(path: &Path, schema: &Schema) -> Self {
        let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
        match ext.as_deref() {
            Some("jsonl" | "ndjson" | "json") => InputFormat::JsonLines,
            Some("tsv") => InputFormat::Delimited(b'\t'),
            _ => InputFormat::Delimited(schema.delimiter as u8),
        }
    }
}

struct RawRow {
    line: u64,
    id: String,
    timestamp: f64,
    text: String,
    label: String,
    confidence: Option<f64>,
}

/// Reads a labelled stream file and keeps rows whose confidence is strictly
/// greater than `min_confidence`. Row order is preserved.
pub fn ingest(path: &Path, min_confidence: f64, schema: &Schema) -> Result<Vec<StreamInstance>> {
    if !path.exists() {
        return Err(Error::MissingInput(path.to_path_buf()));
    }
    let rows = match InputFormat::detect(path, schema) {
        InputFormat::JsonLines => read_json_lines(path, schema)?,
        InputFormat::Delimited(delim) => read_delimited(path, schema, delim)?,
    };

    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let class = schema.classes.parse(&row.label).ok_or_else(|| Error::UnknownLabel {
            line: row.line,
            label: row.label.clone(),
            valid: schema.classes.names().to_vec(),
        })?;
        let confidence = row.confidence.unwrap_or(1.0);
        if !(0.0..=1.0).contains(&confidence) {
            return Err(malformed(
                path,
                row.line,
                format!("confidence {confidence} outside [0, 1]"),
            ));
        }
        if !row.timestamp.is_finite() || row.timestamp < 0.0 {
            return Err(malformed(path, row.line, "timestamp must be a non-negative number"));
        }
        if !seen.insert(row.id.clone()) {
            return Err(malformed(path, row.line, format!("duplicate id `{}`", row.id)));
        }
        if confidence > min_confidence {
            out.push(StreamInstance {
                id: row.id,
                arrival_time: row.timestamp,
                text: row.text,
                true_class: class,
                confidence,
            });
        }
    }
    if out.is_empty() {
        return Err(Error::NoInstances(min_confidence));
    }
    Ok(out)
}

fn malformed(path: &Path, line: u64, message: impl Into<String>) -> Error {
    Error::MalformedRow {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

fn read_json_lines(path: &Path, schema: &Schema) -> Result<Vec<RawRow>> {
    let file = File::open(path).map_err(|e| Error::io(path.display(), e))?;
    let mut rows = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line_no = i as u64 + 1;
        let line = line.map_err(|e| Error::io(path.display(), e))?;
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value =
            serde_json::from_str(&line).map_err(|e| malformed(path, line_no, format!("invalid JSON: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| malformed(path, line_no, "expected a JSON object"))?;

        let string_field = |name: &str| -> Result<String> {
            match obj.get(name) {
                Some(serde_json::Value::String(s)) => Ok(s.clone()),
                Some(serde_json::Value::Number(n)) => Ok(n.to_string()),
                Some(_) => Err(malformed(path, line_no, format!("field `{name}` must be a string"))),
                None => Err(malformed(path, line_no, format!("missing field `{name}`"))),
            }
        };
        let number_field = |name: &str| -> Result<Option<f64>> {
            match obj.get(name) {
                None | Some(serde_json::Value::Null) => Ok(None),
                Some(serde_json::Value::Number(n)) => Ok(n.as_f64()),
                Some(serde_json::Value::String(s)) => s
                    .trim()
                    .parse()
                    .map(Some)
                    .map_err(|_| malformed(path, line_no, format!("field `{name}` is not a number"))),
                Some(_) => Err(malformed(path, line_no, format!("field `{name}` is not a number"))),
            }
        };

        let timestamp = number_field(&schema.timestamp)?
            .ok_or_else(|| malformed(path, line_no, format!("missing field `{}`", schema.timestamp)))?;
        rows.push(RawRow {
            line: line_no,
            id: string_field(&schema.id)?,
            timestamp,
            text: string_field(&schema.text)?,
            label: string_field(&schema.label)?,
            confidence: number_field(&schema.confidence)?,
        });
    }
    Ok(rows)
}

fn read_delimited(path: &Path, schema: &Schema, delimiter: u8) -> Result<Vec<RawRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .flexible(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path.display(), io),
            other => malformed(path, 1, format!("{other:?}")),
        })?;
    let headers = reader.headers()?.clone();
    let column = |name: &str| headers.iter().position(|h| h.trim() == name);
    let require = |name: &str| column(name).ok_or_else(|| malformed(path, 1, format!("header lacks column `{name}`")));
    let id_col = require(&schema.id)?;
    let ts_col = require(&schema.timestamp)?;
    let text_col = require(&schema.text)?;
    let label_col = require(&schema.label)?;
    let conf_col = column(&schema.confidence);

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let field = |col: usize, name: &str| -> Result<&str> {
            match record.get(col) {
                Some(v) if !v.trim().is_empty() => Ok(v),
                _ => Err(malformed(path, line, format!("missing value for `{name}`"))),
            }
        };
        let timestamp: f64 = field(ts_col, &schema.timestamp)?
            .trim()
            .parse()
            .map_err(|_| malformed(path, line, format!("`{}` is not a number", schema.timestamp)))?;
        let confidence = match conf_col.and_then(|c| record.get(c)) {
            Some(v) if !v.trim().is_empty() => Some(
                v.trim()
                    .parse()
                    .map_err(|_| malformed(path, line, format!("`{}` is not a number", schema.confidence)))?,
            ),
            _ => None,
        };
        rows.push(RawRow {
            line,
            id: field(id_col, &schema.id)?.to_string(),
            timestamp,
            text: record.get(text_col).unwrap_or_default().to_string(),
            label: field(label_col, &schema.label)?.to_string(),
            confidence,
        });
    }
    Ok(rows)
}

/// Writes instances as JSON lines in the ingest record layout.
pub fn write_json_lines<W: std::io::Write>(
    mut out: W,
    instances: &[StreamInstance],
    classes: &ClassSet,
) -> std::io::Result<()> {
    for inst in instances {
        let record = serde_json::json!({
            "id": inst.id,
            "timestamp": inst.arrival_time,
            "text": inst.text,
            "label": classes.name(inst.true_class),
            "confidence": inst.confidence,
        });
        writeln!(out, "{record}")?;
    }
    Ok(())
}

/// Parameters for [`prepare_splits`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitOptions {
    pub test_fraction: f64,
    /// Warm-up instances drawn per class.
    pub n_warmup: usize,
    /// Stream bin (interval) size.
    pub bin_size: usize,
    /// Draw the test set per class instead of uniformly.
    #[serde(default)]
    pub stratify: bool,
    pub seed: u64,
}

impl Default for SplitOptions {
    fn default() -> Self {
        SplitOptions {
            test_fraction: DEFAULT_TEST_FRACTION,
            n_warmup: 20,
            bin_size: 36,
            stratify: false,
            seed: 0,
        }
    }
}

/// Test, warm-up and binned stream partitions of a dataset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetSplits {
    pub test: Vec<StreamInstance>,
    pub warmup: Vec<StreamInstance>,
    /// Sorted by arrival time, ties broken by id.
    pub stream: Vec<StreamInstance>,
    pub bin_size: usize,
}

impl DatasetSplits {
    /// Consecutive stream bins; the last one may be short.
    pub fn bins(&self) -> std::slice::Chunks<'_, StreamInstance> {
        self.stream.chunks(self.bin_size)
    }

    pub fn n_bins(&self) -> usize {
        self.stream.len().div_ceil(self.bin_size)
    }
}

pub fn prepare_splits(data: &[StreamInstance], classes: &ClassSet, opts: &SplitOptions) -> Result<DatasetSplits> {
    if data.is_empty() {
        return Err(Error::invalid("data", "dataset is empty"));
    }
    if opts.bin_size == 0 {
        return Err(Error::invalid("bin_size", "must be at least 1"));
    }
    if !(0.0..1.0).contains(&opts.test_fraction) {
        return Err(Error::invalid("test_fraction", "must lie in [0, 1)"));
    }
    if let Some(bad) = data.iter().find(|d| !classes.contains(d.true_class)) {
        return Err(Error::invalid(
            "data",
            format!("instance {} has class {} outside the class set", bad.id, bad.true_class),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.shuffle(&mut rng);

    let mut is_test = vec![false; data.len()];
    if opts.stratify {
        let mut by_class: BTreeMap<ClassLabel, Vec<usize>> = BTreeMap::new();
        for &i in &order {
            by_class.entry(data[i].true_class).or_default().push(i);
        }
        for members in by_class.values() {
            let take = (members.len() as f64 * opts.test_fraction).floor() as usize;
            for &i in &members[..take] {
                is_test[i] = true;
            }
        }
        if !is_test.iter().any(|&t| t) {
            is_test[order[0]] = true;
        }
    } else {
        let n_test = ((data.len() as f64 * opts.test_fraction).floor() as usize).max(1);
        for &i in &order[..n_test] {
            is_test[i] = true;
        }
    }

    let mut is_warmup = vec![false; data.len()];
    let mut per_class = vec![Vec::new(); classes.len()];
    for &i in order.iter().filter(|&&i| !is_test[i]) {
        per_class[data[i].true_class.offset()].push(i);
    }
    for (offset, members) in per_class.iter().enumerate() {
        if members.len() < opts.n_warmup {
            return Err(Error::InsufficientClass {
                class: classes.name(ClassLabel::from_offset(offset)).to_string(),
                available: members.len(),
                required: opts.n_warmup,
            });
        }
        for &i in &members[..opts.n_warmup] {
            is_warmup[i] = true;
        }
    }

    let mut test = Vec::new();
    let mut warmup = Vec::new();
    let mut stream = Vec::new();
    for (i, inst) in data.iter().enumerate() {
        if is_test[i] {
            test.push(inst.clone());
        } else if is_warmup[i] {
            warmup.push(inst.clone());
        } else {
            stream.push(inst.clone());
        }
    }
    stream.sort_by(|a, b| a.arrival_time.total_cmp(&b.arrival_time).then_with(|| a.id.cmp(&b.id)));

    Ok(DatasetSplits {
        test,
        warmup,
        stream,
        bin_size: opts.bin_size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_file(dir: &tempfile::TempDir, name: &str, body: &str) -> std::path::PathBuf {
        let path = dir.path().join(name);
        let mut f = File::create(&path).unwrap();
        f.write_all(body.as_bytes()).unwrap();
        path
    }

    fn synthetic(n: usize, k: usize) -> Vec<StreamInstance> {
        (0..n)
            .map(|i| {
                StreamInstance::new(
                    format!("id{i:05}"),
                    (n - i) as f64,
                    format!("text {i}"),
                    ClassLabel::from_offset(i % k),
                )
            })
            .collect()
    }

    #[test]
    fn strict_confidence_filter() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(
            &dir,
            "d.csv",
            "id,timestamp,text,label,confidence\n\
             a,1,water everywhere,affected_individuals,0.9\n\
             b,2,bridge down,c1,0.65\n\
             c,3,donate now,c2,0.5\n",
        );
        let got = ingest(&path, 0.65, &Schema::default()).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].id, "a");
        assert_eq!(got[0].true_class, ClassLabel::new(3));
    }

    #[test]
    fn zero_threshold_keeps_order() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(
            &dir,
            "d.jsonl",
            concat!(
                r#"{"id":"x","timestamp":5,"text":"t1","label":"c4","confidence":0.3}"#,
                "\n",
                r#"{"id":"y","timestamp":1,"text":"t2","label":"c1"}"#,
                "\n\n",
                r#"{"id":"z","timestamp":3,"text":"t3","label":"rescue_volunteering_donation","confidence":0.8}"#,
                "\n"
            ),
        );
        let got = ingest(&path, 0.0, &Schema::default()).unwrap();
        let ids: Vec<_> = got.iter().map(|i| i.id.as_str()).collect();
        assert_eq!(ids, ["x", "y", "z"]);
        assert_eq!(got[1].confidence, 1.0);
    }

    #[test]
    fn missing_label_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(&dir, "d.csv", "id,timestamp,text,label\na,1,ok,c1\nb,2,broken\n");
        match ingest(&path, 0.0, &Schema::default()) {
            Err(Error::MalformedRow { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }

        let path = write_file(&dir, "d.jsonl", "{\"id\":\"a\",\"timestamp\":1,\"text\":\"t\",\"label\":\"c1\"}\n{\"id\":\"b\",\"timestamp\":1,\"text\":\"t\"}\n");
        match ingest(&path, 0.0, &Schema::default()) {
            Err(Error::MalformedRow { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_label_lists_valid_names() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(&dir, "d.tsv", "id\ttimestamp\ttext\tlabel\na\t1\tok\tweather\n");
        let err = ingest(&path, 0.0, &Schema::default()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("weather"), "{msg}");
        assert!(msg.contains("affected_individuals"), "{msg}");
    }

    #[test]
    fn empty_result_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(&dir, "d.csv", "id,timestamp,text,label,confidence\na,1,x,c1,0.2\n");
        assert!(matches!(
            ingest(&path, 0.65, &Schema::default()),
            Err(Error::NoInstances(_))
        ));
    }

    #[test]
    fn missing_file() {
        let err = ingest(Path::new("/nonexistent/file.csv"), 0.0, &Schema::default()).unwrap_err();
        assert!(matches!(err, Error::MissingInput(_)));
    }

    #[test]
    fn split_counts() {
        let data = synthetic(1000, 4);
        let opts = SplitOptions {
            n_warmup: 20,
            bin_size: 36,
            seed: 11,
            ..Default::default()
        };
        let s = prepare_splits(&data, &ClassSet::crisis(), &opts).unwrap();
        assert_eq!(s.test.len(), 200);
        assert_eq!(s.warmup.len(), 80);
        assert_eq!(s.stream.len(), 720);
        assert_eq!(s.n_bins(), 20);
        assert!(s.bins().all(|b| b.len() == 36));
        for class in ClassSet::crisis().labels() {
            assert_eq!(s.warmup.iter().filter(|i| i.true_class == class).count(), 20);
        }
    }

    #[test]
    fn short_last_bin_is_kept() {
        let data = synthetic(110, 2);
        let classes = ClassSet::new(["a", "b"]).unwrap();
        let opts = SplitOptions {
            n_warmup: 5,
            bin_size: 20,
            seed: 1,
            ..Default::default()
        };
        let s = prepare_splits(&data, &classes, &opts).unwrap();
        assert_eq!(s.stream.len(), 110 - 22 - 10);
        let sizes: Vec<_> = s.bins().map(<[_]>::len).collect();
        assert_eq!(sizes, [20, 20, 20, 18]);
    }

    #[test]
    fn insufficient_class_names_it() {
        let mut data = synthetic(400, 3);
        data.extend((0..12).map(|i| StreamInstance::new(format!("r{i}"), 0.0, "", ClassLabel::new(4))));
        let opts = SplitOptions {
            n_warmup: 20,
            bin_size: 10,
            seed: 3,
            ..Default::default()
        };
        match prepare_splits(&data, &ClassSet::crisis(), &opts) {
            Err(Error::InsufficientClass { class, required, .. }) => {
                assert_eq!(class, "not_relevant_or_cant_judge");
                assert_eq!(required, 20);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn stratified_test_split_is_proportional() {
        let data = synthetic(1000, 4);
        let opts = SplitOptions {
            stratify: true,
            seed: 2,
            ..Default::default()
        };
        let s = prepare_splits(&data, &ClassSet::crisis(), &opts).unwrap();
        for class in ClassSet::crisis().labels() {
            assert_eq!(s.test.iter().filter(|i| i.true_class == class).count(), 50);
        }
    }

    #[test]
    fn arrival_ties_broken_by_id() {
        let data: Vec<_> = ["d", "b", "c", "a", "e", "f", "g", "h", "i", "j"]
            .iter()
            .enumerate()
            .map(|(i, id)| StreamInstance::new(*id, 1.0, "", ClassLabel::from_offset(i % 2)))
            .collect();
        let classes = ClassSet::new(["x", "y"]).unwrap();
        let opts = SplitOptions {
            n_warmup: 1,
            bin_size: 3,
            seed: 9,
            ..Default::default()
        };
        let s = prepare_splits(&data, &classes, &opts).unwrap();
        let ids: Vec<_> = s.stream.iter().map(|i| i.id.clone()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
    }

    #[test]
    fn label_parsing() {
        let classes = ClassSet::crisis();
        assert_eq!(classes.parse("C2"), Some(ClassLabel::new(2)));
        assert_eq!(classes.parse("Affected_Individuals"), Some(ClassLabel::new(3)));
        assert_eq!(classes.parse("c5"), None);
        assert_eq!(classes.parse("c0"), None);
        assert!(ClassSet::new(["a"]).is_err());
        assert!(ClassSet::new(["a", "a"]).is_err());
    }
}
