//! Subcommand arguments and handlers.
//!
//! Every flag maps onto a config key, so the `resolved.cfg` written next to
//! the outputs replays the command. Inputs are loaded and all results are
//! computed before anything is written; a failed command leaves no output.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use annosched_core::classifier::{FeaturizerConfig, Loss};
use annosched_core::dataset::{ingest, write_json_lines, ClassSet, Schema, StreamInstance, DEFAULT_MIN_CONFIDENCE};
use annosched_core::decay::{DecayParams, DecayPreset};
use annosched_core::oracle::{ClockKey, ErrorTargetPolicy, OracleConfig, OracleState};
use annosched_core::sampling::{SamplerPolicy, UncertaintyBand};
use annosched_core::schedules::{
    analyze_cases, gap_accuracy_curve, lab_stream, mistake_schedule, monotone_trend, permute_targets,
    simulate_responses, slip_schedule, AnnotationSchedule, GapCurve, InstancePools, ResponseSet, ScheduleKind,
    SignificanceTest, FILLER_CLASS,
};
use annosched_core::simulation::{
    compare, dataset_fingerprint, generate_drift_stream, replay, run, Comparison, DataSource, DecaySetting,
    DiscardRefresh, DriftSpec, RunManifest, Seeds, SimulationConfig, MANIFEST_FILE,
};
use chrono::{DateTime, SecondsFormat, Utc};
use clap::Args;
use serde_json::json;

use crate::config::Settings;
use crate::{Cli, CliError, Command, GlobalArgs, DEFAULT_OUT_DIR, OUT_DIR_ENV};

type Result<T> = std::result::Result<T, CliError>;

const RESOLVED_FILE: &str = "resolved.cfg";

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Labelled stream file (.jsonl/.ndjson/.json, .tsv, or delimited text) [data.path]
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Keep rows with confidence strictly above this [data.min_confidence]
    #[arg(long)]
    pub min_confidence: Option<f64>,
    /// Field delimiter for delimited files [data.delimiter]
    #[arg(long)]
    pub delimiter: Option<char>,
}

/// Data and split flags shared by `simulate` and `compare`.
#[derive(Debug, Args)]
pub struct RunArgs {
    /// Labelled stream file; without one a synthetic drift stream is used [data.path]
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Synthetic stream length in generator intervals [synthetic.intervals]
    #[arg(long)]
    pub intervals: Option<usize>,
    /// Instances per simulation interval [split.bin_size]
    #[arg(long)]
    pub bin_size: Option<usize>,
    /// Warm-up instances per class [split.n_warmup]
    #[arg(long)]
    pub n_warmup: Option<usize>,
    /// Held-out test share [split.test_fraction]
    #[arg(long)]
    pub test_fraction: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// random | uncertainty | error_avoidance [sampler.policy]
    #[arg(long)]
    pub policy: Option<String>,
    /// slow | fast | none [oracle.preset]
    #[arg(long)]
    pub decay: Option<String>,
    /// Rerun the config recorded in a manifest.json; other settings are ignored
    #[arg(long, value_name = "MANIFEST", conflicts_with_all = ["policy", "decay", "input", "intervals", "bin_size", "n_warmup", "test_fraction"])]
    pub replay: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Comma-separated sampler policies (default: all three) [compare.policies]
    #[arg(long, value_delimiter = ',')]
    pub policies: Vec<String>,
    /// Comma-separated decay presets (default: the oracle preset) [compare.decays]
    #[arg(long, value_delimiter = ',')]
    pub decays: Vec<String>,
    /// Number of consecutive master seeds to run [compare.replicates]
    #[arg(long)]
    pub replicates: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    /// slip | mistake | lab [schedule.kind]
    #[arg(long)]
    pub kind: Option<String>,
    /// Instance file to fill the schedule from; without one a synthetic stream is used [data.path]
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Emit all six orderings of the three target instances [schedule.permute]
    #[arg(long)]
    pub permute: bool,
    /// Lab stream length (default 800) [schedule.max_len]
    #[arg(long)]
    pub max_len: Option<usize>,
    /// Minimum filler items between lab ground-truth items [schedule.gap_min]
    #[arg(long)]
    pub gap_min: Option<usize>,
    /// Maximum filler items between lab ground-truth items [schedule.gap_max]
    #[arg(long)]
    pub gap_max: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Schedule JSON written by `schedule` (repeatable) [analyze.schedules]
    #[arg(long = "schedule", value_name = "FILE")]
    pub schedules: Vec<PathBuf>,
    /// judge_id,position,label file, one per schedule case (repeatable) [analyze.responses]
    #[arg(long = "responses", value_name = "FILE")]
    pub responses: Vec<PathBuf>,
    /// paired_t | z | binomial [analyze.test]
    #[arg(long)]
    pub test: Option<String>,
    /// Simulate this many judges per case instead of reading responses [analyze.simulate_judges]
    #[arg(long, value_name = "N")]
    pub simulate_judges: Option<usize>,
    /// Decay preset of simulated judges [oracle.preset]
    #[arg(long)]
    pub decay: Option<String>,
    /// Minimum observations per gap in the lab trend test [analyze.min_count]
    #[arg(long)]
    pub min_count: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GenSyntheticArgs {
    /// hurricane | uniform [synthetic.preset]
    #[arg(long)]
    pub preset: Option<String>,
    /// Generator intervals [synthetic.intervals]
    #[arg(long)]
    pub intervals: Option<usize>,
    /// Instances per generator interval [synthetic.per_interval]
    #[arg(long)]
    pub per_interval: Option<usize>,
}

struct Ctx {
    settings: Settings,
    out: PathBuf,
    started: DateTime<Utc>,
}

pub fn dispatch(cli: Cli) -> Result<()> {
    let started = Utc::now();
    let mut settings = match &cli.global.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    settings.set_opt("seed", cli.global.seed);
    let out = out_root(&cli.global, &settings);
    let mut ctx = Ctx { settings, out, started };
    match cli.command {
        Command::Ingest(a) => cmd_ingest(&mut ctx, a),
        Command::Simulate(a) => cmd_simulate(&mut ctx, a),
        Command::Compare(a) => cmd_compare(&mut ctx, a),
        Command::Schedule(a) => cmd_schedule(&mut ctx, a),
        Command::Analyze(a) => cmd_analyze(&mut ctx, a),
        Command::GenSynthetic(a) => cmd_gen_synthetic(&mut ctx, a),
    }
}

fn out_root(global: &GlobalArgs, settings: &Settings) -> PathBuf {
    global
        .out
        .clone()
        .or_else(|| settings.raw("output.dir").map(PathBuf::from))
        .or_else(|| {
            std::env::var_os(OUT_DIR_ENV)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from)
        })
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

fn path_opt(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

fn join_paths(paths: &[PathBuf]) -> Option<String> {
    (!paths.is_empty()).then(|| {
        paths
            .iter()
            .map(|p| p.display().to_string())
            .collect::<Vec<_>>()
            .join(",")
    })
}

// ---- settings to core types ----

fn master_seed(s: &Settings) -> Result<u64> {
    s.get_or("seed", 0)
}

fn seeds(s: &Settings) -> Result<Seeds> {
    let base = Seeds::from_master(master_seed(s)?);
    Ok(Seeds {
        split: s.get_or("split.seed", base.split)?,
        model: s.get_or("classifier.seed", base.model)?,
        oracle: s.get_or("oracle.seed", base.oracle)?,
        sampler: s.get_or("sampler.seed", base.sampler)?,
    })
}

fn class_set(s: &Settings) -> Result<ClassSet> {
    let names = s.list("data.classes");
    if names.is_empty() {
        Ok(ClassSet::crisis())
    } else {
        Ok(ClassSet::new(names)?)
    }
}

fn schema(s: &Settings) -> Result<Schema> {
    let d = Schema::default();
    let col = |key: &str, default: String| s.raw(key).map_or(default, str::to_string);
    Ok(Schema {
        id: col("data.id_column", d.id),
        timestamp: col("data.timestamp_column", d.timestamp),
        text: col("data.text_column", d.text),
        label: col("data.label_column", d.label),
        confidence: col("data.confidence_column", d.confidence),
        delimiter: s.get_or("data.delimiter", d.delimiter)?,
        classes: class_set(s)?,
    })
}

fn drift_spec(s: &Settings) -> Result<DriftSpec> {
    let intervals = s.get_or("synthetic.intervals", 25usize)?;
    let mut d = match s.raw("synthetic.preset").unwrap_or("hurricane") {
        "hurricane" => DriftSpec::hurricane(intervals),
        "uniform" => DriftSpec::stationary(vec![0.25; 4], intervals, DriftSpec::hurricane(1).instances_per_interval),
        other => {
            return Err(CliError::Config(format!(
                "synthetic.preset: unknown preset `{other}` (expected hurricane or uniform)"
            )))
        }
    };
    d.instances_per_interval = s.get_or("synthetic.per_interval", d.instances_per_interval)?;
    d.vocab_per_class = s.get_or("synthetic.vocab", d.vocab_per_class)?;
    d.tokens_per_instance = s.get_or("synthetic.tokens", d.tokens_per_instance)?;
    d.noise_rate = s.get_or("synthetic.noise", d.noise_rate)?;
    d.confusion_rate = s.get_or("synthetic.confusion", d.confusion_rate)?;
    d.validate()?;
    Ok(d)
}

fn data_source(s: &Settings) -> Result<DataSource> {
    match s.raw("data.path") {
        Some(path) => Ok(DataSource::File {
            path: PathBuf::from(path),
            schema: schema(s)?,
            min_confidence: s.get_or("data.min_confidence", DEFAULT_MIN_CONFIDENCE)?,
        }),
        None => Ok(DataSource::Synthetic {
            drift: drift_spec(s)?,
            seed: s.get_or("synthetic.seed", master_seed(s)?)?,
        }),
    }
}

/// A named preset wins; explicit alpha/beta/gamma apply when no preset (or
/// `custom`) is named and must be given together.
fn decay_setting(s: &Settings) -> Result<DecaySetting> {
    if let Some(p) = s.raw("oracle.preset").filter(|p| *p != "custom") {
        let preset: DecayPreset = p.parse().map_err(|e| CliError::Config(format!("oracle.preset: {e}")))?;
        return Ok(preset.into());
    }
    let parts = (
        s.get::<f64>("oracle.alpha")?,
        s.get::<f64>("oracle.beta")?,
        s.get::<f64>("oracle.gamma")?,
    );
    match parts {
        (Some(a), Some(b), Some(g)) => Ok(DecaySetting::Custom(DecayParams::new(a, b, g)?)),
        (None, None, None) if s.raw("oracle.preset").is_none() => Ok(DecayPreset::None.into()),
        _ => Err(CliError::Config(
            "oracle.alpha, oracle.beta and oracle.gamma must be given together".into(),
        )),
    }
}

fn oracle_config(s: &Settings, decay: DecayParams, seed: u64) -> Result<OracleConfig> {
    Ok(OracleConfig {
        params: decay,
        error_target_policy: s.get_or("oracle.error_target_policy", ErrorTargetPolicy::default())?,
        clock: s.get_or("oracle.clock", ClockKey::default())?,
        seed,
    })
}

fn featurizer(s: &Settings) -> Result<FeaturizerConfig> {
    match s.raw("classifier.featurizer").unwrap_or("hashed") {
        "hashed" => Ok(FeaturizerConfig::Hashed {
            dim: s.get_or("classifier.dim", 256)?,
            seed: s.get_or("classifier.hash_seed", 0)?,
        }),
        "pretrained" => {
            let path = s.raw("classifier.vectors").ok_or_else(|| {
                CliError::Config("classifier.featurizer = pretrained needs classifier.vectors".into())
            })?;
            Ok(FeaturizerConfig::Pretrained {
                path: PathBuf::from(path),
            })
        }
        other => Err(CliError::Config(format!(
            "classifier.featurizer: unknown featurizer `{other}` (expected hashed or pretrained)"
        ))),
    }
}

fn simulation_config(s: &Settings) -> Result<SimulationConfig> {
    let mut c = SimulationConfig::new(data_source(s)?, master_seed(s)?);
    c.bin_size = s.get_or("split.bin_size", c.bin_size)?;
    c.n_warmup = s.get_or("split.n_warmup", c.n_warmup)?;
    c.test_fraction = s.get_or("split.test_fraction", c.test_fraction)?;
    c.stratify_test = s.get_or("split.stratify", c.stratify_test)?;
    c.decay = decay_setting(s)?;
    c.error_target_policy = s.get_or("oracle.error_target_policy", c.error_target_policy)?;
    c.clock = s.get_or("oracle.clock", c.clock)?;
    c.policy = s.get_or("sampler.policy", c.policy)?;
    c.band = UncertaintyBand {
        low: s.get_or("sampler.band_low", c.band.low)?,
        high: s.get_or("sampler.band_high", c.band.high)?,
    };
    c.discard_after = s.get_or("sampler.discard_after_interval", c.discard_after)?;
    c.discard_refresh = s.get_or("sampler.discard_refresh", DiscardRefresh::default())?;
    c.classifier.learning_rate = s.get_or("classifier.lr", c.classifier.learning_rate)?;
    c.classifier.l2 = s.get_or("classifier.reg", c.classifier.l2)?;
    c.classifier.passes = s.get_or("classifier.passes", c.classifier.passes)?;
    c.classifier.warmup_epochs = s.get_or("classifier.warmup_epochs", c.classifier.warmup_epochs)?;
    c.classifier.loss = s.get_or("classifier.loss", Loss::default())?;
    c.featurizer = featurizer(s)?;
    c.seeds = seeds(s)?;
    c.classifier.seed = c.seeds.model;
    c.validate()?;
    Ok(c)
}

fn apply_run_args(s: &mut Settings, a: &RunArgs) {
    s.set_opt("data.path", path_opt(&a.input));
    s.set_opt("synthetic.intervals", a.intervals);
    s.set_opt("split.bin_size", a.bin_size);
    s.set_opt("split.n_warmup", a.n_warmup);
    s.set_opt("split.test_fraction", a.test_fraction);
}

// ---- output helpers ----

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(annosched_core::Error::from)?;
    text.push('\n');
    write_text(path, &text)
}

fn finish(w: BufWriter<fs::File>, path: &Path) -> Result<()> {
    w.into_inner().map_err(|e| CliError::io(path, e.into_error()))?;
    Ok(())
}

/// Writes `manifest.json` for a non-simulation command. With `resolved`
/// set, also writes `resolved.cfg` next to it.
fn write_command_manifest(
    ctx: &Ctx,
    command: &str,
    path: &Path,
    resolved: bool,
    summary: serde_json::Value,
) -> Result<()> {
    let manifest = json!({
        "command": command,
        "code_version": env!("CARGO_PKG_VERSION"),
        "started_at": ctx.started.to_rfc3339_opts(SecondsFormat::Millis, true),
        "settings": ctx.settings.values(),
        "replay": format!("annosched {command} --config {RESOLVED_FILE}"),
        "summary": summary,
    });
    write_json(path, &manifest)?;
    if resolved {
        let dir = path.parent().unwrap_or(Path::new("."));
        write_text(&dir.join(RESOLVED_FILE), &ctx.settings.to_file_text())?;
    }
    Ok(())
}

fn class_counts(instances: &[StreamInstance], classes: &ClassSet) -> serde_json::Map<String, serde_json::Value> {
    classes
        .labels()
        .map(|c| {
            (
                classes.name(c).to_string(),
                json!(instances.iter().filter(|i| i.true_class == c).count()),
            )
        })
        .collect()
}

// ---- commands ----

fn cmd_ingest(ctx: &mut Ctx, a: IngestArgs) -> Result<()> {
    let s = &mut ctx.settings;
    s.set_opt("data.path", path_opt(&a.input));
    s.set_opt("data.min_confidence", a.min_confidence);
    s.set_opt("data.delimiter", a.delimiter);
    let path = s
        .raw("data.path")
        .map(PathBuf::from)
        .ok_or_else(|| CliError::Config("ingest needs --input or data.path".into()))?;
    let schema = schema(s)?;
    let min_confidence = s.get_or("data.min_confidence", DEFAULT_MIN_CONFIDENCE)?;
    let instances = ingest(&path, min_confidence, &schema)?;

    let summary = json!({
        "n_instances": instances.len(),
        "per_class": class_counts(&instances, &schema.classes),
        "min_confidence": min_confidence,
        "dataset_fingerprint": dataset_fingerprint(&instances),
    });
    create_dir(&ctx.out)?;
    write_command_manifest(ctx, "ingest", &ctx.out.join(MANIFEST_FILE), true, summary.clone())?;
    let file = ctx.out.join("instances.jsonl");
    let mut w = create(&file)?;
    write_json_lines(&mut w, &instances, &schema.classes).map_err(|e| CliError::io(&file, e))?;
    finish(w, &file)?;
    write_json(&ctx.out.join("summary.json"), &summary)?;
    println!("{} instances kept -> {}", instances.len(), file.display());
    Ok(())
}

fn cmd_simulate(ctx: &mut Ctx, a: SimulateArgs) -> Result<()> {
    if let Some(path) = &a.replay {
        let manifest = RunManifest::read(path)?;
        let output = replay(&manifest)?;
        output.write(&ctx.out)?;
        println!(
            "replayed {} intervals, final macro AUC {:.4} -> {}",
            output.intervals.len(),
            output.final_macro_auc(),
            ctx.out.display()
        );
        return Ok(());
    }
    let s = &mut ctx.settings;
    apply_run_args(s, &a.run);
    s.set_opt("sampler.policy", a.policy);
    s.set_opt("oracle.preset", a.decay);
    let config = simulation_config(s)?;
    let output = run(&config)?;
    output.write(&ctx.out)?;
    write_text(&ctx.out.join(RESOLVED_FILE), &ctx.settings.to_file_text())?;
    println!(
        "{} intervals, {} annotations ({} oracle errors), final macro AUC {:.4}, mean {:.4} -> {}",
        output.intervals.len(),
        output.annotations.len(),
        output.annotations.iter().filter(|r| r.result.was_error).count(),
        output.final_macro_auc(),
        output.mean_macro_auc(),
        ctx.out.display()
    );
    Ok(())
}

fn cmd_compare(ctx: &mut Ctx, a: CompareArgs) -> Result<()> {
    let s = &mut ctx.settings;
    apply_run_args(s, &a.run);
    s.set_opt(
        "compare.policies",
        (!a.policies.is_empty()).then(|| a.policies.join(",")),
    );
    s.set_opt("compare.decays", (!a.decays.is_empty()).then(|| a.decays.join(",")));
    s.set_opt("compare.replicates", a.replicates);

    let base = simulation_config(s)?;
    let policies: Vec<SamplerPolicy> = match s.list("compare.policies") {
        l if l.is_empty() => vec![
            SamplerPolicy::Random,
            SamplerPolicy::Uncertainty,
            SamplerPolicy::ErrorAvoidance,
        ],
        l => l.iter().map(|p| p.parse()).collect::<std::result::Result<_, _>>()?,
    };
    let decays: Vec<DecaySetting> = match s.list("compare.decays") {
        l if l.is_empty() => vec![base.decay],
        l => l
            .iter()
            .map(|d| d.parse::<DecayPreset>().map(DecaySetting::from))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| CliError::Config(format!("compare.decays: {e}")))?,
    };
    let replicates: usize = s.get_or("compare.replicates", 1)?;
    if replicates == 0 {
        return Err(CliError::Config("compare.replicates: must be at least 1".into()));
    }
    let explicit_stream_seed = s.raw("synthetic.seed").is_some();
    let master = master_seed(s)?;

    let mut results: Vec<(u64, Comparison)> = Vec::with_capacity(replicates);
    for r in 0..replicates as u64 {
        let seed = master.wrapping_add(r);
        let mut template = if r == 0 {
            base.clone()
        } else {
            base.clone().with_master_seed(seed)
        };
        if let DataSource::Synthetic { seed: stream_seed, .. } = &mut template.data {
            if !explicit_stream_seed {
                *stream_seed = seed;
            }
        }
        let configs: Vec<SimulationConfig> = policies
            .iter()
            .flat_map(|&policy| decays.iter().map(move |&decay| (policy, decay)))
            .map(|(policy, decay)| SimulationConfig {
                policy,
                decay,
                ..template.clone()
            })
            .collect();
        log::info!(
            "replicate {} of {replicates}: {} runs with master seed {seed}",
            r + 1,
            configs.len()
        );
        results.push((seed, compare(&configs)?));
    }

    create_dir(&ctx.out)?;
    let n_runs = results[0].1.runs.len();
    let mut rows = Vec::with_capacity(n_runs);
    for i in 0..n_runs {
        let first = &results[0].1.runs[i];
        let mean = |f: fn(&annosched_core::simulation::RunOutput) -> f64| {
            results.iter().map(|(_, c)| f(&c.runs[i].output)).sum::<f64>() / results.len() as f64
        };
        rows.push(json!({
            "run_id": first.run_id,
            "policy": first.policy.to_string(),
            "decay": first.decay,
            "replicates": results.len(),
            "mean_final_macro_auc": mean(|o| o.final_macro_auc()),
            "mean_macro_auc": mean(|o| o.mean_macro_auc()),
        }));
    }
    write_command_manifest(
        ctx,
        "compare",
        &ctx.out.join(MANIFEST_FILE),
        true,
        json!({ "runs": rows }),
    )?;
    for (seed, comparison) in &results {
        let dir = if replicates == 1 {
            ctx.out.clone()
        } else {
            ctx.out.join(format!("seed-{seed}"))
        };
        create_dir(&dir)?;
        for r in &comparison.runs {
            r.output.write(&dir.join("runs").join(&r.run_id))?;
        }
        let table = dir.join("comparison.csv");
        comparison.write_table(create(&table)?)?;
        let long = dir.join("comparison_long.csv");
        comparison.write_long(create(&long)?)?;
    }
    let summary = ctx.out.join("summary.csv");
    let mut w = create(&summary)?;
    let line = |w: &mut BufWriter<fs::File>, text: String| writeln!(w, "{text}").map_err(|e| CliError::io(&summary, e));
    line(
        &mut w,
        "run_id,policy,decay,replicates,mean_final_macro_auc,mean_macro_auc".into(),
    )?;
    println!("{:<28} {:>16} {:>16}", "run", "final macro AUC", "mean macro AUC");
    for r in &rows {
        let (id, fin, mean) = (
            r["run_id"].as_str().unwrap_or_default(),
            r["mean_final_macro_auc"].as_f64().unwrap_or(f64::NAN),
            r["mean_macro_auc"].as_f64().unwrap_or(f64::NAN),
        );
        line(
            &mut w,
            format!(
                "{id},{},{},{},{fin},{mean}",
                r["policy"].as_str().unwrap_or_default(),
                r["decay"].as_str().unwrap_or_default(),
                results.len()
            ),
        )?;
        println!("{id:<28} {fin:>16.4} {mean:>16.4}");
    }
    finish(w, &summary)?;
    println!("-> {}", ctx.out.display());
    Ok(())
}

fn schedule_pool(s: &Settings) -> Result<Vec<StreamInstance>> {
    match data_source(s)? {
        DataSource::File {
            path,
            schema,
            min_confidence,
        } => Ok(ingest(&path, min_confidence, &schema)?),
        DataSource::Synthetic { drift, seed } => Ok(generate_drift_stream(&drift, seed)?),
    }
}

fn cmd_schedule(ctx: &mut Ctx, a: ScheduleArgs) -> Result<()> {
    let s = &mut ctx.settings;
    s.set_opt("schedule.kind", a.kind);
    s.set_opt("data.path", path_opt(&a.input));
    if a.permute {
        s.set("schedule.permute", true);
    }
    s.set_opt("schedule.max_len", a.max_len);
    s.set_opt("schedule.gap_min", a.gap_min);
    s.set_opt("schedule.gap_max", a.gap_max);

    let kind: ScheduleKind = s
        .get("schedule.kind")?
        .ok_or_else(|| CliError::Config("schedule needs --kind or schedule.kind".into()))?;
    let permute = s.get_or("schedule.permute", false)?;
    let classes = class_set(s)?;
    let pool = schedule_pool(s)?;
    let schedules = match kind {
        ScheduleKind::Slip | ScheduleKind::Mistake => {
            let pools = InstancePools::from_instances(pool);
            let schedule = if kind == ScheduleKind::Slip {
                slip_schedule(&pools)?
            } else {
                mistake_schedule(&pools)?
            };
            if permute {
                let targets: Vec<StreamInstance> = schedule
                    .target_positions
                    .iter()
                    .map(|&p| schedule.entries[p - 1].instance.clone())
                    .collect();
                permute_targets(&schedule, &targets)?
            } else {
                vec![schedule]
            }
        }
        ScheduleKind::Lab => {
            if permute {
                return Err(CliError::Config(
                    "schedule.permute applies to slip and mistake schedules only".into(),
                ));
            }
            let (noise, ground_truth): (Vec<_>, Vec<_>) = pool.into_iter().partition(|i| i.true_class == FILLER_CLASS);
            let gaps = s.get_or("schedule.gap_min", 1usize)?..=s.get_or("schedule.gap_max", 4usize)?;
            vec![lab_stream(
                &ground_truth,
                &noise,
                gaps,
                Some(s.get_or("schedule.max_len", 800)?),
                master_seed(s)?,
            )?]
        }
    };
    let value = match schedules.as_slice() {
        [one] => one.to_json(&classes),
        many => serde_json::Value::Array(many.iter().map(|c| c.to_json(&classes)).collect()),
    };

    let is_file = ctx.out.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let (file, manifest) = if is_file {
        let stem = ctx
            .out
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        if let Some(parent) = ctx.out.parent().filter(|p| !p.as_os_str().is_empty()) {
            create_dir(parent)?;
        }
        (ctx.out.clone(), ctx.out.with_file_name(format!("{stem}.manifest.json")))
    } else {
        create_dir(&ctx.out)?;
        (ctx.out.join("schedule.json"), ctx.out.join(MANIFEST_FILE))
    };
    let summary = json!({
        "kind": kind,
        "cases": schedules.len(),
        "length": schedules[0].len(),
        "target_positions": schedules[0].target_positions,
    });
    write_command_manifest(ctx, "schedule", &manifest, !is_file, summary)?;
    write_json(&file, &value)?;
    let sequence: Vec<String> = schedules[0].entries.iter().map(|e| e.class.to_string()).collect();
    println!(
        "{kind} schedule, {} case(s) of {} items -> {}",
        schedules.len(),
        schedules[0].len(),
        file.display()
    );
    if kind != ScheduleKind::Lab {
        println!("classes: {}", sequence.join(" "));
        println!("target positions: {:?}", schedules[0].target_positions);
    }
    Ok(())
}

fn load_schedules(path: &Path, classes: &ClassSet) -> Result<Vec<AnnotationSchedule>> {
    if !path.exists() {
        return Err(CliError::MissingInput(format!("schedule file {}", path.display())));
    }
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(annosched_core::Error::from)?;
    match &value {
        serde_json::Value::Array(items) => items
            .iter()
            .map(|v| Ok(AnnotationSchedule::from_json(v, classes)?))
            .collect(),
        single => Ok(vec![AnnotationSchedule::from_json(single, classes)?]),
    }
}

fn cmd_analyze(ctx: &mut Ctx, a: AnalyzeArgs) -> Result<()> {
    let s = &mut ctx.settings;
    s.set_opt("analyze.schedules", join_paths(&a.schedules));
    s.set_opt("analyze.responses", join_paths(&a.responses));
    s.set_opt("analyze.test", a.test);
    s.set_opt("analyze.simulate_judges", a.simulate_judges);
    s.set_opt("oracle.preset", a.decay);
    s.set_opt("analyze.min_count", a.min_count);

    let classes = class_set(s)?;
    let schedule_paths = s.list("analyze.schedules");
    if schedule_paths.is_empty() {
        return Err(CliError::Config("analyze needs --schedule or analyze.schedules".into()));
    }
    let mut cases = Vec::new();
    for p in &schedule_paths {
        cases.extend(load_schedules(Path::new(p), &classes)?);
    }
    let kind = cases[0].kind;
    if cases.iter().any(|c| c.kind != kind) {
        return Err(CliError::Config("all schedules must be of the same kind".into()));
    }
    let test: SignificanceTest = s.get_or("analyze.test", SignificanceTest::default())?;
    let min_count: usize = s.get_or("analyze.min_count", 30)?;

    let simulated = s.get::<usize>("analyze.simulate_judges")?;
    let responses: Vec<ResponseSet> = match simulated {
        Some(n) => {
            let decay = decay_setting(s)?.params();
            let oracle_seed = seeds(s)?.oracle;
            let mut all = Vec::with_capacity(cases.len());
            for (k, case) in cases.iter().enumerate() {
                let mut judges = Vec::with_capacity(n);
                for j in 0..n {
                    let seed = oracle_seed.wrapping_add((k * n + j) as u64);
                    let mut oracle = OracleState::new(oracle_config(s, decay, seed)?, classes.len())?;
                    judges.push(simulate_responses(case, &mut oracle, format!("sim-{k}-{j}")));
                }
                all.push(ResponseSet { judges });
            }
            all
        }
        None => {
            let paths = s.list("analyze.responses");
            if paths.len() != cases.len() {
                return Err(CliError::Config(format!(
                    "{} response file(s) for {} schedule case(s); give one per case or use --simulate-judges",
                    paths.len(),
                    cases.len()
                )));
            }
            let delimiter = s.get_or("data.delimiter", ',')? as u8;
            paths
                .iter()
                .map(|p| Ok(ResponseSet::read_delimited(Path::new(p), &classes, delimiter)?))
                .collect::<Result<_>>()?
        }
    };
    let pairs: Vec<(AnnotationSchedule, ResponseSet)> = cases.into_iter().zip(responses).collect();

    enum Outcome {
        Positions(annosched_core::schedules::PositionErrorReport),
        Gaps(GapCurve, annosched_core::schedules::TrendReport),
    }
    let outcome = if kind == ScheduleKind::Lab {
        let mut curve = GapCurve::default();
        for (schedule, responses) in &pairs {
            curve.merge(&gap_accuracy_curve(schedule, responses)?);
        }
        let trend = monotone_trend(&curve.pooled(), min_count);
        Outcome::Gaps(curve, trend)
    } else {
        Outcome::Positions(analyze_cases(&pairs, test)?)
    };

    create_dir(&ctx.out)?;
    let summary = match &outcome {
        Outcome::Positions(r) => json!(r),
        Outcome::Gaps(_, t) => json!(t),
    };
    write_command_manifest(ctx, "analyze", &ctx.out.join(MANIFEST_FILE), true, summary)?;
    if simulated.is_some() {
        for (k, (_, responses)) in pairs.iter().enumerate() {
            let path = ctx.out.join(format!("responses_{k}.csv"));
            responses.write_delimited(create(&path)?, &classes)?;
        }
    }
    match outcome {
        Outcome::Positions(report) => {
            let path = ctx.out.join("position_errors.csv");
            let mut w = create(&path)?;
            let mut text = String::from("position,errors,samples,error_rate\n");
            for i in 0..report.positions.len() {
                text += &format!(
                    "{},{},{},{}\n",
                    report.positions[i], report.errors[i], report.samples[i], report.error_rates[i]
                );
                println!(
                    "position {:>2}: error rate {:.2} ({}/{})",
                    report.positions[i], report.error_rates[i], report.errors[i], report.samples[i]
                );
            }
            w.write_all(text.as_bytes()).map_err(|e| CliError::io(&path, e))?;
            finish(w, &path)?;
            write_json(&ctx.out.join("report.json"), &report)?;
            println!("last vs earlier positions: p = {:.4} ({})", report.p_value, report.test);
        }
        Outcome::Gaps(curve, trend) => {
            let mut pooled = String::from("gap,total,correct,accuracy\n");
            for (gap, total, correct) in curve.pooled() {
                pooled += &format!("{gap},{total},{correct},{}\n", correct as f64 / total as f64);
            }
            write_text(&ctx.out.join("gap_curve.csv"), &pooled)?;
            let mut by_class = String::from("class,gap,total,correct,accuracy\n");
            for p in &curve.points {
                by_class += &format!(
                    "{},{},{},{},{}\n",
                    classes.name(p.class),
                    p.gap,
                    p.total,
                    p.correct,
                    p.correct as f64 / p.total as f64
                );
            }
            write_text(&ctx.out.join("gap_curve_by_class.csv"), &by_class)?;
            write_json(&ctx.out.join("trend.json"), &trend)?;
            println!(
                "slope {:.5} (z {:.2}) over {} gaps; non-increasing: {}",
                trend.slope, trend.slope_z, trend.gaps_used, trend.non_increasing
            );
        }
    }
    println!("-> {}", ctx.out.display());
    Ok(())
}

fn cmd_gen_synthetic(ctx: &mut Ctx, a: GenSyntheticArgs) -> Result<()> {
    let s = &mut ctx.settings;
    s.set_opt("synthetic.preset", a.preset);
    s.set_opt("synthetic.intervals", a.intervals);
    s.set_opt("synthetic.per_interval", a.per_interval);
    let drift = drift_spec(s)?;
    let seed = s.get_or("synthetic.seed", master_seed(s)?)?;
    let source = DataSource::Synthetic { drift, seed };
    let classes = source.classes()?;
    let instances = source.load()?;

    create_dir(&ctx.out)?;
    let summary = json!({
        "n_instances": instances.len(),
        "per_class": class_counts(&instances, &classes),
        "dataset_fingerprint": dataset_fingerprint(&instances),
    });
    write_command_manifest(ctx, "gen-synthetic", &ctx.out.join(MANIFEST_FILE), true, summary)?;
    let file = ctx.out.join("synthetic.jsonl");
    let mut w = create(&file)?;
    write_json_lines(&mut w, &instances, &classes).map_err(|e| CliError::io(&file, e))?;
    finish(w, &file)?;
    println!("{} instances -> {}", instances.len(), file.display());
    Ok(())
}
