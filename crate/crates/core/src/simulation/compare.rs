use std::io::Write;

use rayon::prelude::*;

use super::{run, DecaySetting, IntervalMetrics, RunOutput, SimulationConfig};
use crate::decay::DecayPreset;
use crate::error::{Error, Result};
use crate::sampling::SamplerPolicy;

/// Aligned results of several runs over the same data and seeds.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub runs: Vec<ComparisonRun>,
}

#[derive(Clone, Debug)]
pub struct ComparisonRun {
    pub run_id: String,
    pub policy: SamplerPolicy,
    pub decay: String,
    pub output: RunOutput,
}

impl ComparisonRun {
    pub fn intervals(&self) -> &[IntervalMetrics] {
        &self.output.intervals
    }
}

/// Strips the fields a comparison may vary.
fn comparable_key(config: &SimulationConfig) -> Result<serde_json::Value> {
    let mut c = config.clone();
    c.policy = SamplerPolicy::Uncertainty;
    c.decay = DecaySetting::Preset(DecayPreset::None);
    c.out_dir = None;
    Ok(serde_json::to_value(c)?)
}

/// Runs configs that differ only in sampler policy and decay, in parallel.
pub fn compare(configs: &[SimulationConfig]) -> Result<Comparison> {
    let first = configs
        .first()
        .ok_or_else(|| Error::Incomparable("no configurations given".into()))?;
    let key = comparable_key(first)?;
    for (i, c) in configs.iter().enumerate().skip(1) {
        if comparable_key(c)? != key {
            return Err(Error::Incomparable(format!(
                "config {i} differs from config 0 in more than sampler policy and decay (data, splits, seeds and model settings must match)"
            )));
        }
    }
    let outputs: Vec<RunOutput> = configs.par_iter().map(run).collect::<Result<_>>()?;

    let mut runs: Vec<ComparisonRun> = Vec::with_capacity(outputs.len());
    for (config, output) in configs.iter().zip(outputs) {
        let base = format!("{}-{}", config.policy, config.decay.name());
        let dupes = runs
            .iter()
            .filter(|r| r.run_id == base || r.run_id.starts_with(&format!("{base}#")))
            .count();
        let run_id = if dupes == 0 { base } else { format!("{base}#{dupes}") };
        runs.push(ComparisonRun {
            run_id,
            policy: config.policy,
            decay: config.decay.name().to_string(),
            output,
        });
    }
    Ok(Comparison { runs })
}

const LONG_METRICS: [&str; 7] = [
    "n_arrived",
    "n_selected",
    "n_annotated",
    "n_oracle_errors",
    "accuracy",
    "macro_auc",
    "macro_f1",
];

fn metric(m: &IntervalMetrics, name: &str) -> f64 {
    match name {
        "n_arrived" => m.n_arrived as f64,
        "n_selected" => m.n_selected as f64,
        "n_annotated" => m.n_annotated as f64,
        "n_oracle_errors" => m.n_oracle_errors as f64,
        "accuracy" => m.eval.accuracy,
        "macro_auc" => m.eval.macro_auc,
        "macro_f1" => m.eval.macro_f1,
        _ => unreachable!("unknown metric {name}"),
    }
}

impl Comparison {
    /// Macro AUC per run averaged over intervals.
    pub fn mean_macro_auc(&self) -> Vec<(String, f64)> {
        self.runs
            .iter()
            .map(|r| (r.run_id.clone(), r.output.mean_macro_auc()))
            .collect()
    }

    pub fn n_intervals(&self) -> usize {
        self.runs.iter().map(|r| r.output.intervals.len()).max().unwrap_or(0)
    }

    /// One row per interval, one macro-AUC column per run, then a `mean` row.
    pub fn write_table<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["interval".to_string()];
        header.extend(self.runs.iter().map(|r| r.run_id.clone()));
        w.write_record(&header)?;
        for i in 0..self.n_intervals() {
            let mut rec = vec![(i + 1).to_string()];
            rec.extend(self.runs.iter().map(|r| {
                r.output
                    .intervals
                    .get(i)
                    .map_or_else(String::new, |m| m.eval.macro_auc.to_string())
            }));
            w.write_record(&rec)?;
        }
        let mut rec = vec!["mean".to_string()];
        rec.extend(self.mean_macro_auc().into_iter().map(|(_, v)| v.to_string()));
        w.write_record(&rec)?;
        w.flush().map_err(|e| Error::Csv(e.into()))
    }

    /// Plot-ready rows of `(run_id, policy, decay, interval, metric, value)`.
    pub fn write_long<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["run_id", "policy", "decay", "interval", "metric", "value"])?;
        for r in &self.runs {
            for m in &r.output.intervals {
                for name in LONG_METRICS {
                    w.write_record([
                        r.run_id.as_str(),
                        r.policy.name(),
                        r.decay.as_str(),
                        &m.interval_index.to_string(),
                        name,
                        &metric(m, name).to_string(),
                    ])?;
                }
            }
        }
        w.flush().map_err(|e| Error::Csv(e.into()))
    }
}
