//! Sliding-window record of oracle annotations and per-class prediction
//! errors, and the class scores derived from it.
//!
//! Each row holds a `K x K` grid `errors[i][j]`: the prediction error on
//! class `i` measured when the latest annotation of class `j` entered the
//! model. Appending a row annotated `j` copies every other column from the
//! previous row and recomputes column `j` as `1 - F1(c_i)` over all rows in
//! the window, using the annotated labels as truth.

use std::io::Write;

use serde::Serialize;

use crate::classifier::{per_class_f1, FeatureVector, OnlineClassifier};
use crate::dataset::ClassLabel;

/// Intervals kept besides the current one.
pub const WINDOW_PAST_INTERVALS: usize = 2;

/// Discarding starts after this many intervals.
pub const DEFAULT_DISCARD_AFTER: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorMatrixRow {
    pub instance_id: String,
    pub arrival_time: f64,
    pub interval_index: usize,
    /// One-based annotation event counter across the whole run.
    pub event_index: u64,
    pub annotated_class: ClassLabel,
    /// Row-major `K x K`, entry `i * K + j` is `E(c_i | c_j)`.
    pub errors: Vec<f64>,
    #[serde(skip)]
    pub features: FeatureVector,
}

impl ErrorMatrixRow {
    pub fn error(&self, num_classes: usize, i: ClassLabel, j: ClassLabel) -> f64 {
        self.errors[i.offset() * num_classes + j.offset()]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorMatrix {
    num_classes: usize,
    rows: Vec<ErrorMatrixRow>,
    events: u64,
    current_interval: usize,
}

impl ErrorMatrix {
    pub fn new(num_classes: usize) -> Self {
        ErrorMatrix {
            num_classes,
            rows: Vec::new(),
            events: 0,
            current_interval: 0,
        }
    }

    /// Builds a matrix from prepared rows, e.g. for score checks.
    pub fn from_rows(num_classes: usize, rows: Vec<ErrorMatrixRow>) -> Self {
        let events = rows.iter().map(|r| r.event_index).max().unwrap_or(0);
        let current_interval = rows.iter().map(|r| r.interval_index).max().unwrap_or(0);
        ErrorMatrix {
            num_classes,
            rows,
            events,
            current_interval,
        }
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn rows(&self) -> &[ErrorMatrixRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn events(&self) -> u64 {
        self.events
    }

    pub fn current_interval(&self) -> usize {
        self.current_interval
    }

    /// Moves the window to `interval`, dropping rows older than the two
    /// preceding intervals. Returns the number of pruned rows.
    pub fn advance_interval(&mut self, interval: usize) -> usize {
        self.current_interval = self.current_interval.max(interval);
        let oldest = self.current_interval.saturating_sub(WINDOW_PAST_INTERVALS);
        let before = self.rows.len();
        self.rows.retain(|r| r.interval_index >= oldest);
        before - self.rows.len()
    }

    /// Appends the row for an annotation. `model` must already include the
    /// update on this instance.
    pub fn update(
        &mut self,
        instance_id: &str,
        arrival_time: f64,
        features: FeatureVector,
        annotated: ClassLabel,
        model: &OnlineClassifier,
        interval: usize,
    ) -> &ErrorMatrixRow {
        if interval > self.current_interval {
            self.advance_interval(interval);
        }
        let k = self.num_classes;
        let mut errors = self.rows.last().map_or_else(|| vec![0.0; k * k], |r| r.errors.clone());

        let mut truth: Vec<ClassLabel> = self.rows.iter().map(|r| r.annotated_class).collect();
        truth.push(annotated);
        let predicted: Vec<ClassLabel> = self
            .rows
            .iter()
            .map(|r| &r.features)
            .chain(std::iter::once(&features))
            .map(|x| model.predict(x))
            .collect();
        let j = annotated.offset();
        for (i, f1) in per_class_f1(&truth, &predicted, k).into_iter().enumerate() {
            errors[i * k + j] = f1.map_or(0.0, |f| 1.0 - f);
        }

        self.events += 1;
        self.rows.push(ErrorMatrixRow {
            instance_id: instance_id.to_string(),
            arrival_time,
            interval_index: interval,
            event_index: self.events,
            annotated_class: annotated,
            errors,
            features,
        });
        self.rows.last().expect("row just pushed")
    }

    /// Sum of column `c` over every row and every class.
    pub fn error_avoidance_score(&self, c: ClassLabel) -> f64 {
        let k = self.num_classes;
        self.rows
            .iter()
            .map(|r| (0..k).map(|i| r.errors[i * k + c.offset()]).sum::<f64>())
            .sum()
    }

    /// `exp(-dT)` for the event gap between the two latest rows of class `c`;
    /// zero with fewer than two such rows.
    pub fn decay_score(&self, c: ClassLabel) -> f64 {
        let mut latest = self.rows.iter().rev().filter(|r| r.annotated_class == c);
        match (latest.next(), latest.next()) {
            (Some(a), Some(b)) => (-(a.event_index.abs_diff(b.event_index) as f64)).exp(),
            _ => 0.0,
        }
    }

    pub fn final_score(&self, c: ClassLabel) -> f64 {
        self.error_avoidance_score(c) * self.decay_score(c)
    }

    /// The class to exclude from annotation in `current_interval`, if any.
    /// Nothing is discarded up to `discard_after`, on ties, or when every
    /// score is zero.
    pub fn discarded_class(&self, current_interval: usize, discard_after: usize) -> Option<ClassLabel> {
        if current_interval <= discard_after {
            return None;
        }
        let scores: Vec<f64> = (0..self.num_classes)
            .map(|c| self.final_score(ClassLabel::from_offset(c)))
            .collect();
        pick_discarded(&scores)
    }

    pub fn write_json_lines<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for row in &self.rows {
            serde_json::to_writer(&mut out, row)?;
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Unique strictly positive maximum of `scores`.
pub fn pick_discarded(scores: &[f64]) -> Option<ClassLabel> {
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if best <= 0.0 || scores.iter().filter(|&&s| s == best).count() > 1 {
        return None;
    }
    scores.iter().position(|&s| s == best).map(ClassLabel::from_offset)
}
