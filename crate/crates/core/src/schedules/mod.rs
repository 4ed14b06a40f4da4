//! Annotation schedules for human-judge experiments.
//!
//! Two fixed 20-item crowd schedules place the target class `c3` either with
//! a mix of short and long gaps (slip schedule) or at equal gaps (mistake
//! schedule). The lab stream interleaves ground-truth items with one to four
//! filler items of the "not relevant" class.

mod analysis;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::ops::RangeInclusive;
use std::path::Path;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{ClassLabel, ClassSet, StreamInstance};
use crate::error::{Error, Result};
use crate::oracle::OracleState;

pub use analysis::{
    analyze_cases, analyze_positions, gap_accuracy_curve, monotone_trend, GapCurve, GapPoint, PositionErrorReport,
    SignificanceTest, TrendReport,
};

/// Class order of the slip schedule, as one-based class indices.
pub const SLIP_SEQUENCE: [usize; 20] = [4, 1, 2, 3, 1, 3, 4, 1, 4, 1, 4, 2, 1, 4, 1, 2, 4, 2, 4, 3];

/// Class order of the mistake schedule.
pub const MISTAKE_SEQUENCE: [usize; 20] = [4, 1, 2, 1, 4, 2, 1, 4, 3, 1, 2, 4, 3, 1, 2, 1, 3, 2, 4, 4];

/// Target class of both crowd schedules (affected individuals).
pub const TARGET_CLASS: ClassLabel = ClassLabel::new_const(3);

/// Filler class of the lab stream (not relevant or can't judge).
pub const FILLER_CLASS: ClassLabel = ClassLabel::new_const(4);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleKind {
    Slip,
    Mistake,
    Lab,
}

impl fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScheduleKind::Slip => "slip",
            ScheduleKind::Mistake => "mistake",
            ScheduleKind::Lab => "lab",
        })
    }
}

impl FromStr for ScheduleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "slip" => Ok(ScheduleKind::Slip),
            "mistake" => Ok(ScheduleKind::Mistake),
            "lab" => Ok(ScheduleKind::Lab),
            other => Err(Error::invalid(
                "kind",
                format!("unknown schedule kind `{other}` (expected slip, mistake or lab)"),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleEntry {
    /// One-based.
    pub position: usize,
    pub class: ClassLabel,
    pub instance: StreamInstance,
}

/// An ordered presentation sequence.
///
/// For slip and mistake schedules `target_positions` are the positions
/// holding `target_class`. For lab streams they are the ground-truth
/// positions and `target_class` is the filler class.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnotationSchedule {
    pub entries: Vec<ScheduleEntry>,
    pub target_class: ClassLabel,
    pub target_positions: Vec<usize>,
    pub kind: ScheduleKind,
}

/// Per-class queues of instances to fill schedule slots from.
#[derive(Clone, Debug, Default)]
pub struct InstancePools {
    by_class: BTreeMap<ClassLabel, VecDeque<StreamInstance>>,
}

impl InstancePools {
    pub fn from_instances(instances: impl IntoIterator<Item = StreamInstance>) -> Self {
        let mut by_class: BTreeMap<ClassLabel, VecDeque<StreamInstance>> = BTreeMap::new();
        for inst in instances {
            by_class.entry(inst.true_class).or_default().push_back(inst);
        }
        InstancePools { by_class }
    }

    pub fn available(&self, class: ClassLabel) -> usize {
        self.by_class.get(&class).map_or(0, VecDeque::len)
    }

    fn check(&self, sequence: &[usize]) -> Result<()> {
        for (index, needed) in sequence.iter().copied().counts() {
            let class = ClassLabel::new(index);
            let available = self.available(class);
            if available < needed {
                return Err(Error::InsufficientClass {
                    class: class.to_string(),
                    available,
                    required: needed,
                });
            }
        }
        Ok(())
    }
}

fn crowd_schedule(pools: &InstancePools, sequence: &[usize], kind: ScheduleKind) -> Result<AnnotationSchedule> {
    pools.check(sequence)?;
    let mut cursor: BTreeMap<ClassLabel, usize> = BTreeMap::new();
    let entries = sequence
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let class = ClassLabel::new(c);
            let next = cursor.entry(class).or_default();
            let instance = pools.by_class[&class][*next].clone();
            *next += 1;
            ScheduleEntry {
                position: i + 1,
                class,
                instance,
            }
        })
        .collect::<Vec<_>>();
    let target_positions = entries
        .iter()
        .filter(|e| e.class == TARGET_CLASS)
        .map(|e| e.position)
        .collect();
    Ok(AnnotationSchedule {
        entries,
        target_class: TARGET_CLASS,
        target_positions,
        kind,
    })
}

/// The 20-item slip schedule; `c3` sits at positions 4, 6 and 20.
pub fn slip_schedule(pools: &InstancePools) -> Result<AnnotationSchedule> {
    crowd_schedule(pools, &SLIP_SEQUENCE, ScheduleKind::Slip)
}

/// The 20-item mistake schedule; `c3` sits at positions 9, 13 and 17.
pub fn mistake_schedule(pools: &InstancePools) -> Result<AnnotationSchedule> {
    crowd_schedule(pools, &MISTAKE_SEQUENCE, ScheduleKind::Mistake)
}

/// Every assignment of three target instances to the three target slots.
/// The identity assignment comes first; other slots are left untouched.
pub fn permute_targets(schedule: &AnnotationSchedule, targets: &[StreamInstance]) -> Result<Vec<AnnotationSchedule>> {
    if schedule.target_positions.len() != 3 {
        return Err(Error::invalid(
            "schedule",
            format!("expected 3 target positions, found {}", schedule.target_positions.len()),
        ));
    }
    if targets.len() != 3 {
        return Err(Error::invalid(
            "targets",
            format!("expected 3 target instances, found {}", targets.len()),
        ));
    }
    if let Some(bad) = targets.iter().find(|t| t.true_class != schedule.target_class) {
        return Err(Error::invalid(
            "targets",
            format!(
                "instance {} is {}, not the target class {}",
                bad.id, bad.true_class, schedule.target_class
            ),
        ));
    }
    Ok((0..3)
        .permutations(3)
        .map(|perm| {
            let mut case = schedule.clone();
            for (slot, &pick) in perm.iter().enumerate() {
                let pos = schedule.target_positions[slot];
                case.entries[pos - 1].instance = targets[pick].clone();
            }
            case
        })
        .collect())
}

/// Interleaves consecutive ground-truth items with a uniformly drawn number
/// of filler items (drawn without replacement from `noise_pool`). When
/// `max_len` is given the stream is cut at that length.
pub fn lab_stream(
    ground_truth: &[StreamInstance],
    noise_pool: &[StreamInstance],
    gaps: RangeInclusive<usize>,
    max_len: Option<usize>,
    seed: u64,
) -> Result<AnnotationSchedule> {
    if ground_truth.is_empty() {
        return Err(Error::invalid(
            "ground_truth",
            "at least one ground-truth instance is required",
        ));
    }
    if gaps.is_empty() {
        return Err(Error::invalid("gap_range", "empty gap range"));
    }
    let filler = noise_pool.first().map_or(FILLER_CLASS, |n| n.true_class);
    if noise_pool.iter().any(|n| n.true_class != filler) {
        return Err(Error::invalid("noise_pool", "all noise instances must share one class"));
    }
    let worst_case = (ground_truth.len() - 1) * gaps.end();
    let required = max_len.map_or(worst_case, |m| worst_case.min(m));
    if noise_pool.len() < required {
        return Err(Error::InsufficientClass {
            class: filler.to_string(),
            available: noise_pool.len(),
            required,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut noise: Vec<&StreamInstance> = noise_pool.iter().collect();
    noise.shuffle(&mut rng);
    let mut noise = noise.into_iter();

    let mut items: Vec<(&StreamInstance, bool)> = Vec::new();
    for (i, gt) in ground_truth.iter().enumerate() {
        if i > 0 {
            let gap = rng.random_range(gaps.clone());
            for _ in 0..gap {
                items.push((noise.next().expect("noise pool checked"), false));
            }
        }
        items.push((gt, true));
        if max_len.is_some_and(|m| items.len() >= m) {
            break;
        }
    }
    if let Some(m) = max_len {
        items.truncate(m);
    }

    let entries: Vec<ScheduleEntry> = items
        .iter()
        .enumerate()
        .map(|(i, (inst, _))| ScheduleEntry {
            position: i + 1,
            class: inst.true_class,
            instance: (*inst).clone(),
        })
        .collect();
    let target_positions = items
        .iter()
        .enumerate()
        .filter(|(_, (_, gt))| *gt)
        .map(|(i, _)| i + 1)
        .collect();
    Ok(AnnotationSchedule {
        entries,
        target_class: filler,
        target_positions,
        kind: ScheduleKind::Lab,
    })
}

impl AnnotationSchedule {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn classes(&self) -> Vec<ClassLabel> {
        self.entries.iter().map(|e| e.class).collect()
    }

    pub fn to_json(&self, classes: &ClassSet) -> serde_json::Value {
        serde_json::json!({
            "kind": self.kind,
            "target_class": classes.name(self.target_class),
            "target_positions": self.target_positions,
            "entries": self.entries.iter().map(|e| serde_json::json!({
                "position": e.position,
                "class": classes.name(e.class),
                "instance_id": e.instance.id,
                "text": e.instance.text,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &serde_json::Value, classes: &ClassSet) -> Result<Self> {
        #[derive(Deserialize)]
        struct RawEntry {
            position: usize,
            class: String,
            instance_id: String,
            #[serde(default)]
            text: String,
        }
        #[derive(Deserialize)]
        struct Raw {
            kind: ScheduleKind,
            target_class: String,
            target_positions: Vec<usize>,
            entries: Vec<RawEntry>,
        }
        let raw: Raw = serde_json::from_value(value.clone())?;
        let parse = |name: &str| {
            classes.parse(name).ok_or_else(|| Error::UnknownLabel {
                line: 0,
                label: name.to_string(),
                valid: classes.names().to_vec(),
            })
        };
        let mut entries = Vec::with_capacity(raw.entries.len());
        for (i, e) in raw.entries.into_iter().enumerate() {
            if e.position != i + 1 {
                return Err(Error::invalid(
                    "schedule",
                    format!("positions must run 1..n, found {} at index {i}", e.position),
                ));
            }
            let class = parse(&e.class)?;
            entries.push(ScheduleEntry {
                position: e.position,
                class,
                instance: StreamInstance::new(e.instance_id, e.position as f64, e.text, class),
            });
        }
        if raw.target_positions.iter().any(|&p| p == 0 || p > entries.len()) {
            return Err(Error::invalid("schedule", "target position out of range"));
        }
        Ok(AnnotationSchedule {
            entries,
            target_class: parse(&raw.target_class)?,
            target_positions: raw.target_positions,
            kind: raw.kind,
        })
    }
}

/// One judge's labels, aligned with schedule positions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JudgeResponses {
    pub judge_id: String,
    pub labels: Vec<ClassLabel>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ResponseSet {
    pub judges: Vec<JudgeResponses>,
}

impl ResponseSet {
    pub fn len(&self) -> usize {
        self.judges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.judges.is_empty()
    }

    /// Reads `judge_id, position, label` rows (with a header). Judges keep
    /// their first-appearance order.
    pub fn read_delimited(path: &Path, classes: &ClassSet, delimiter: u8) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingInput(path.to_path_buf()));
        }
        let mut reader = csv::ReaderBuilder::new().delimiter(delimiter).from_path(path)?;
        let mut order: Vec<String> = Vec::new();
        let mut by_judge: BTreeMap<String, BTreeMap<usize, ClassLabel>> = BTreeMap::new();
        for record in reader.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line());
            let bad = |m: &str| Error::MalformedRow {
                path: path.display().to_string(),
                line,
                message: m.to_string(),
            };
            let judge = record.get(0).ok_or_else(|| bad("missing judge_id"))?.trim().to_string();
            let position: usize = record
                .get(1)
                .and_then(|p| p.trim().parse().ok())
                .ok_or_else(|| bad("missing or invalid position"))?;
            let raw_label = record.get(2).ok_or_else(|| bad("missing label"))?;
            let label = classes.parse(raw_label).ok_or_else(|| Error::UnknownLabel {
                line,
                label: raw_label.to_string(),
                valid: classes.names().to_vec(),
            })?;
            if !by_judge.contains_key(&judge) {
                order.push(judge.clone());
            }
            if by_judge.entry(judge).or_default().insert(position, label).is_some() {
                return Err(bad("duplicate position for judge"));
            }
        }
        let mut judges = Vec::with_capacity(order.len());
        for judge_id in order {
            let answers = &by_judge[&judge_id];
            if answers.keys().copied().ne(1..=answers.len()) {
                return Err(Error::MisalignedResponses(format!(
                    "judge {judge_id} does not cover positions 1..{}",
                    answers.len()
                )));
            }
            judges.push(JudgeResponses {
                judge_id,
                labels: answers.values().copied().collect(),
            });
        }
        Ok(ResponseSet { judges })
    }

    pub fn write_delimited<W: std::io::Write>(&self, out: W, classes: &ClassSet) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["judge_id", "position", "label"])?;
        for judge in &self.judges {
            for (i, label) in judge.labels.iter().enumerate() {
                writer.write_record([judge.judge_id.as_str(), &(i + 1).to_string(), classes.name(*label)])?;
            }
        }
        writer.flush().map_err(|e| Error::io("responses", e))?;
        Ok(())
    }
}

/// Labels every schedule item in order with a simulated annotator.
pub fn simulate_responses(
    schedule: &AnnotationSchedule,
    oracle: &mut OracleState,
    judge_id: impl Into<String>,
) -> JudgeResponses {
    JudgeResponses {
        judge_id: judge_id.into(),
        labels: schedule
            .entries
            .iter()
            .map(|e| oracle.annotate(&e.instance).assigned_label)
            .collect(),
    }
}
