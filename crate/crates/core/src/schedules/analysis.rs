use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, ContinuousCDF, Discrete, Normal, StudentsT};

use super::{AnnotationSchedule, ResponseSet, ScheduleKind};
use crate::dataset::ClassLabel;
use crate::error::{Error, Result};

/// Two-sided test of the last target position against the earlier ones.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignificanceTest {
    /// Paired t-test on each judge's `e_last - mean(e_earlier)`.
    #[default]
    PairedT,
    /// Two-proportion z-test, last position vs pooled earlier positions.
    TwoProportionZ,
    /// Exact binomial test of the last-position error count against the
    /// pooled earlier error rate.
    ExactBinomial,
}

impl FromStr for SignificanceTest {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "paired_t" | "paired" => Ok(SignificanceTest::PairedT),
            "z" | "two_proportion_z" => Ok(SignificanceTest::TwoProportionZ),
            "binomial" | "exact_binomial" => Ok(SignificanceTest::ExactBinomial),
            other => Err(Error::invalid(
                "test",
                format!("unknown test `{other}` (expected paired_t, z or binomial)"),
            )),
        }
    }
}

impl fmt::Display for SignificanceTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignificanceTest::PairedT => "paired_t",
            SignificanceTest::TwoProportionZ => "two_proportion_z",
            SignificanceTest::ExactBinomial => "exact_binomial",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositionErrorReport {
    /// Target positions of the (first) schedule.
    pub positions: Vec<usize>,
    /// Micro-average error rate per target slot.
    pub error_rates: Vec<f64>,
    pub errors: Vec<usize>,
    pub samples: Vec<usize>,
    pub p_value: f64,
    pub test: SignificanceTest,
}

/// Error rates at the target positions of one schedule.
pub fn analyze_positions(
    schedule: &AnnotationSchedule,
    responses: &ResponseSet,
    test: SignificanceTest,
) -> Result<PositionErrorReport> {
    analyze_cases(&[(schedule.clone(), responses.clone())], test)
}

/// Pools judges over several cases (e.g. the six target permutations),
/// slot by slot.
pub fn analyze_cases(
    cases: &[(AnnotationSchedule, ResponseSet)],
    test: SignificanceTest,
) -> Result<PositionErrorReport> {
    let (first, _) = cases
        .first()
        .ok_or_else(|| Error::MisalignedResponses("no cases given".into()))?;
    let slots = first.target_positions.len();
    if slots < 2 {
        return Err(Error::invalid("schedule", "at least two target positions are needed"));
    }
    // per judge, one error indicator per slot
    let mut judges: Vec<Vec<bool>> = Vec::new();
    for (schedule, responses) in cases {
        if schedule.target_positions.len() != slots {
            return Err(Error::MisalignedResponses(
                "cases disagree on the number of target positions".into(),
            ));
        }
        if responses.is_empty() {
            return Err(Error::MisalignedResponses("a case has no judges".into()));
        }
        for judge in &responses.judges {
            if judge.labels.len() != schedule.len() {
                return Err(Error::MisalignedResponses(format!(
                    "judge {} answered {} of {} positions",
                    judge.judge_id,
                    judge.labels.len(),
                    schedule.len()
                )));
            }
            judges.push(
                schedule
                    .target_positions
                    .iter()
                    .map(|&p| judge.labels[p - 1] != schedule.target_class)
                    .collect(),
            );
        }
    }

    let n = judges.len();
    let errors: Vec<usize> = (0..slots).map(|s| judges.iter().filter(|j| j[s]).count()).collect();
    let error_rates = errors.iter().map(|&e| e as f64 / n as f64).collect();
    let p_value = match test {
        SignificanceTest::PairedT => paired_t(&judges),
        SignificanceTest::TwoProportionZ => {
            let earlier: usize = errors[..slots - 1].iter().sum();
            two_proportion_z(errors[slots - 1], n, earlier, n * (slots - 1))
        }
        SignificanceTest::ExactBinomial => {
            let earlier: usize = errors[..slots - 1].iter().sum();
            exact_binomial(errors[slots - 1], n, earlier as f64 / (n * (slots - 1)) as f64)
        }
    };
    Ok(PositionErrorReport {
        positions: first.target_positions.clone(),
        error_rates,
        errors,
        samples: vec![n; slots],
        p_value,
        test,
    })
}

fn paired_t(judges: &[Vec<bool>]) -> f64 {
    let n = judges.len();
    if n < 2 {
        return 1.0;
    }
    let diffs: Vec<f64> = judges
        .iter()
        .map(|j| {
            let (last, earlier) = j.split_last().expect("slots >= 2");
            let earlier_mean = earlier.iter().filter(|e| **e).count() as f64 / earlier.len() as f64;
            f64::from(u8::from(*last)) - earlier_mean
        })
        .collect();
    let mean = diffs.iter().sum::<f64>() / n as f64;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    if var == 0.0 {
        return if mean == 0.0 { 1.0 } else { 0.0 };
    }
    let t = mean / (var / n as f64).sqrt();
    let dist = StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("valid degrees of freedom");
    (2.0 * (1.0 - dist.cdf(t.abs()))).min(1.0)
}

fn two_proportion_z(x1: usize, n1: usize, x2: usize, n2: usize) -> f64 {
    let pooled = (x1 + x2) as f64 / (n1 + n2) as f64;
    let se = (pooled * (1.0 - pooled) * (1.0 / n1 as f64 + 1.0 / n2 as f64)).sqrt();
    if se == 0.0 {
        return 1.0;
    }
    let z = (x1 as f64 / n1 as f64 - x2 as f64 / n2 as f64) / se;
    let normal = Normal::standard();
    (2.0 * (1.0 - normal.cdf(z.abs()))).min(1.0)
}

fn exact_binomial(successes: usize, trials: usize, p0: f64) -> f64 {
    if p0 <= 0.0 || p0 >= 1.0 {
        let expected = if p0 <= 0.0 { 0 } else { trials };
        return if successes == expected { 1.0 } else { 0.0 };
    }
    let dist = Binomial::new(p0, trials as u64).expect("valid binomial");
    let observed = dist.pmf(successes as u64);
    let p: f64 = (0..=trials as u64)
        .map(|k| dist.pmf(k))
        .filter(|&pk| pk <= observed * (1.0 + 1e-7))
        .sum();
    p.min(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapPoint {
    pub class: ClassLabel,
    /// Steps since the previous item of the same class.
    pub gap: usize,
    pub total: usize,
    pub correct: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GapCurve {
    /// Sorted by class, then gap.
    pub points: Vec<GapPoint>,
}

impl GapCurve {
    /// Totals per gap across classes.
    pub fn pooled(&self) -> Vec<(usize, usize, usize)> {
        let mut by_gap: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for p in &self.points {
            let e = by_gap.entry(p.gap).or_default();
            e.0 += p.total;
            e.1 += p.correct;
        }
        by_gap.into_iter().map(|(g, (t, c))| (g, t, c)).collect()
    }

    pub fn merge(&mut self, other: &GapCurve) {
        let mut map: BTreeMap<(ClassLabel, usize), (usize, usize)> = self
            .points
            .iter()
            .map(|p| ((p.class, p.gap), (p.total, p.correct)))
            .collect();
        for p in &other.points {
            let e = map.entry((p.class, p.gap)).or_default();
            e.0 += p.total;
            e.1 += p.correct;
        }
        self.points = map
            .into_iter()
            .map(|((class, gap), (total, correct))| GapPoint {
                class,
                gap,
                total,
                correct,
            })
            .collect();
    }
}

/// Correct responses on ground-truth items, tallied by the distance to the
/// previous item of the same class in the stream.
pub fn gap_accuracy_curve(schedule: &AnnotationSchedule, responses: &ResponseSet) -> Result<GapCurve> {
    if schedule.kind != ScheduleKind::Lab {
        return Err(Error::invalid("schedule", "gap analysis needs a lab stream"));
    }
    let mut last_position: BTreeMap<ClassLabel, usize> = BTreeMap::new();
    let mut gaps: Vec<Option<usize>> = vec![None; schedule.len()];
    for entry in &schedule.entries {
        if let Some(prev) = last_position.insert(entry.class, entry.position) {
            gaps[entry.position - 1] = Some(entry.position - prev);
        }
    }

    let mut tally: BTreeMap<(ClassLabel, usize), (usize, usize)> = BTreeMap::new();
    for judge in &responses.judges {
        if judge.labels.len() != schedule.len() {
            return Err(Error::MisalignedResponses(format!(
                "judge {} does not cover the stream",
                judge.judge_id
            )));
        }
        for &pos in &schedule.target_positions {
            let entry = &schedule.entries[pos - 1];
            if let Some(gap) = gaps[pos - 1] {
                let t = tally.entry((entry.class, gap)).or_default();
                t.0 += 1;
                t.1 += usize::from(judge.labels[pos - 1] == entry.class);
            }
        }
    }
    Ok(GapCurve {
        points: tally
            .into_iter()
            .map(|((class, gap), (total, correct))| GapPoint {
                class,
                gap,
                total,
                correct,
            })
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    /// Weighted least-squares slope of correct fraction on gap.
    pub slope: f64,
    pub slope_z: f64,
    /// Largest z-score of an increase between consecutive gaps.
    pub max_increase_z: f64,
    pub gaps_used: usize,
    /// Slope significantly negative and no significant increase, both at 3 sigma.
    pub non_increasing: bool,
}

/// Monotone-decrease check on `(gap, total, correct)` rows; gaps with fewer
/// than `min_count` observations are ignored.
pub fn monotone_trend(rows: &[(usize, usize, usize)], min_count: usize) -> TrendReport {
    let used: Vec<(f64, f64, f64)> = rows
        .iter()
        .filter(|(_, total, _)| *total >= min_count.max(1))
        .map(|&(g, t, c)| (g as f64, t as f64, c as f64 / t as f64))
        .collect();
    if used.len() < 2 {
        return TrendReport {
            slope: 0.0,
            slope_z: 0.0,
            max_increase_z: 0.0,
            gaps_used: used.len(),
            non_increasing: false,
        };
    }
    let w_sum: f64 = used.iter().map(|u| u.1).sum();
    let x_bar = used.iter().map(|u| u.1 * u.0).sum::<f64>() / w_sum;
    let y_bar = used.iter().map(|u| u.1 * u.2).sum::<f64>() / w_sum;
    let sxx: f64 = used.iter().map(|u| u.1 * (u.0 - x_bar).powi(2)).sum();
    let sxy: f64 = used.iter().map(|u| u.1 * (u.0 - x_bar) * (u.2 - y_bar)).sum();
    let slope = sxy / sxx;
    // binomial variance of each fraction, floored to avoid zero at 0 or 1
    let var_slope: f64 = used
        .iter()
        .map(|u| {
            let p = u.2.clamp(0.5 / u.1, 1.0 - 0.5 / u.1);
            (u.1 * (u.0 - x_bar)).powi(2) * p * (1.0 - p) / u.1
        })
        .sum::<f64>()
        / sxx.powi(2);
    let slope_z = slope / var_slope.sqrt();

    let max_increase_z = used
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let pa = a.2.clamp(0.5 / a.1, 1.0 - 0.5 / a.1);
            let pb = b.2.clamp(0.5 / b.1, 1.0 - 0.5 / b.1);
            (b.2 - a.2) / (pa * (1.0 - pa) / a.1 + pb * (1.0 - pb) / b.1).sqrt()
        })
        .fold(f64::NEG_INFINITY, f64::max);

    TrendReport {
        slope,
        slope_z,
        max_increase_z,
        gaps_used: used.len(),
        non_increasing: slope < 0.0 && slope_z <= -3.0 && max_increase_z <= 3.0,
    }
}
